#pragma once

#include <chrono>
#include <cstdint>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <vector>

#include "emo20q/core/knowledge_base.hpp"
#include "emo20q/game.hpp"
#include "emo20q/nlu.hpp"

namespace emo20q {

// Maps (secret emotion, raw question) to an answer category. Implementations
// must be total, deterministic for a fixed configuration, and safe to call
// concurrently.
class AnswerClassifier {
 public:
  virtual ~AnswerClassifier() = default;
  virtual Answer classify(std::string_view emotion, std::string_view question) const = 0;
};

// Reference classifier: match the question to a canonical one, then take the
// most probable smoothed answer for the emotion. No match or a tie → Other.
Answer kb_answer(const KnowledgeBase& kb, const Nlu& nlu, std::string_view emotion,
                 std::string_view question);

class KbClassifier : public AnswerClassifier {
 public:
  KbClassifier(std::shared_ptr<const KnowledgeBase> kb, std::shared_ptr<const Nlu> nlu)
      : kb_(std::move(kb)), nlu_(std::move(nlu)) {}
  Answer classify(std::string_view emotion, std::string_view question) const override {
    return kb_answer(*kb_, *nlu_, emotion, question);
  }

 private:
  std::shared_ptr<const KnowledgeBase> kb_;
  std::shared_ptr<const Nlu> nlu_;
};

// Talks to a child process over line-delimited JSON:
//   request  {"emotion": "...", "question": "..."}
//   response {"answer": "yes"|"no"|"maybe"}
// Any failure or a reply slower than `timeout` falls back to `fallback`; after
// a failure the child is restarted on the next call.
class ExternalClassifier : public AnswerClassifier {
 public:
  ExternalClassifier(std::vector<std::string> argv, std::shared_ptr<const AnswerClassifier> fallback,
                     std::chrono::milliseconds timeout = std::chrono::milliseconds(2000));
  ~ExternalClassifier() override;
  ExternalClassifier(const ExternalClassifier&) = delete;
  ExternalClassifier& operator=(const ExternalClassifier&) = delete;

  Answer classify(std::string_view emotion, std::string_view question) const override;

  // Number of calls answered by the fallback so far.
  std::uint64_t fallback_count() const;

 private:
  struct Child;
  bool ensure_started() const;
  void stop() const;

  std::vector<std::string> argv_;
  std::shared_ptr<const AnswerClassifier> fallback_;
  std::chrono::milliseconds timeout_;
  mutable std::mutex mu_;
  mutable std::unique_ptr<Child> child_;
  mutable std::uint64_t fallbacks_ = 0;
};

std::string pick_secret(const Lexicon& lexicon, std::uint64_t seed);

enum class AnswererStatus { Playing, UserWon, Revealed };

struct AnswererState {
  std::string secret;
  std::vector<QaEvent> answered;
  int turn = 0;  // turns consumed so far
  AnswererStatus status = AnswererStatus::Playing;

  friend bool operator==(const AnswererState&, const AnswererState&) = default;
};

// Surface text for the answerer's replies. Placeholders: {emotion}, {turns}.
struct AnswererReplies {
  std::string yes = "yes.";
  std::string no = "no.";
  std::string other = "maybe — I'm not sure how to answer that.";
  std::string correct_guess = "Yes! It was {emotion}. You got it in {turns} turns.";
  std::string wrong_guess = "no.";
  std::string reveal = "That was the last turn. The emotion was {emotion}.";
  std::string empty_input = "Ask me a yes/no question about the emotion, or guess it.";
};

struct RespondResult {
  AnswererState state;
  std::vector<std::string> lines;
  bool consumed_turn = false;
};

AnswererState new_answerer(std::string secret);

// Guesses are checked before questions. Blank input re-prompts without using a turn.
RespondResult respond(const AnswererState& st, const KnowledgeBase& kb, const Nlu& nlu,
                      const AnswerClassifier& classifier, std::string_view text,
                      const AnswererReplies& replies = {});

std::string render_answer(Answer a, const AnswererReplies& replies);

// Replaces each {key} with its value.
std::string fill_template(std::string_view tmpl,
                          const std::vector<std::pair<std::string, std::string>>& values);

}  // namespace emo20q
