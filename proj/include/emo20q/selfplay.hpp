#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "emo20q/answerer.hpp"
#include "emo20q/asker.hpp"
#include "emo20q/core/knowledge_base.hpp"
#include "emo20q/nlu.hpp"

namespace emo20q {

// Replaces the wrapped classifier's category with a uniformly chosen
// different one with probability `noise`. Holds its own generator, so one
// instance belongs to one game.
class NoisyClassifier : public AnswerClassifier {
 public:
  NoisyClassifier(const AnswerClassifier& inner, double noise, std::uint64_t seed);
  Answer classify(std::string_view emotion, std::string_view question) const override;

 private:
  const AnswerClassifier& inner_;
  double noise_;
  mutable std::mt19937_64 gen_;
};

struct SelfPlayOptions {
  int games = 100;
  double noise = 0.0;
  std::uint64_t seed = 0;
  unsigned jobs = 1;
  AskerPolicy policy;
};

struct GameOutcome {
  std::size_t index = 0;
  std::string secret;
  bool won = false;
  int turns = 0;
  // (question text, reply text) for every exchange, in order.
  std::vector<std::pair<std::string, std::string>> exchanges;
  std::vector<QaEvent> asker_history;
};

struct EmotionTally {
  int games = 0;
  int wins = 0;
};

struct SelfPlayReport {
  int games = 0;
  int wins = 0;
  double mean_turns_to_win = 0.0;  // over winning games only
  std::map<std::string, EmotionTally> per_emotion;
  double noise = 0.0;
  std::uint64_t seed = 0;
  // Win rate of an agent that only guesses distinct words at random.
  double baseline_win_rate = 0.0;
  // (observed − baseline) / binomial standard error under the baseline.
  double baseline_z = 0.0;

  double win_rate() const { return games > 0 ? static_cast<double>(wins) / games : 0.0; }
};

// Agent asker against the agent answerer over the text channel: questions and
// guesses go through respond(), replies come back through bucket_answer().
GameOutcome play_selfplay_game(const KnowledgeBase& kb, const Nlu& nlu, const std::string& secret,
                               double noise, std::uint64_t seed, const AskerPolicy& policy = {},
                               const AnswererReplies& replies = {});

// Throws ValidationError unless 0 <= noise <= 1 and games >= 0.
SelfPlayReport run_selfplay(const KnowledgeBase& kb, const Nlu& nlu, const SelfPlayOptions& opts);

std::string report_to_json(const SelfPlayReport& r);
std::string report_to_text(const SelfPlayReport& r);

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

}  // namespace emo20q
