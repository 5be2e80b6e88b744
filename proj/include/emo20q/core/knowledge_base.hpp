#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "emo20q/core/answer.hpp"
#include "emo20q/core/lexicon.hpp"

namespace emo20q {

struct CanonicalQuestion {
  std::string id;
  std::string gloss;
  std::vector<std::string> paraphrases;
};

struct CountEntry {
  std::string emotion;
  std::string question;
  Answer answer = Answer::Other;
  std::uint64_t count = 0;
};

using AnswerCounts = std::array<std::uint64_t, kAnswerCount>;

// Answer counts c(e,q,a) and their additively smoothed conditionals P(a|e,q).
// Immutable once constructed; safe to share across sessions.
class KnowledgeBase {
 public:
  static constexpr int kFormatVersion = 1;

  // Validates every invariant; throws ValidationError naming the offending key.
  KnowledgeBase(Lexicon lexicon, std::vector<CanonicalQuestion> questions,
                const std::vector<CountEntry>& counts, double alpha, int version = kFormatVersion);

  const Lexicon& lexicon() const { return lexicon_; }
  const std::vector<CanonicalQuestion>& questions() const { return questions_; }
  std::size_t question_count() const { return questions_.size(); }
  const CanonicalQuestion& question(std::size_t q) const { return questions_.at(q); }
  std::optional<std::size_t> find_question(std::string_view id) const;
  std::size_t question_index(std::string_view id) const;  // throws LookupError
  double alpha() const { return alpha_; }
  int version() const { return version_; }

  const AnswerCounts& counts(std::size_t e, std::size_t q) const {
    return counts_[e * questions_.size() + q];
  }
  std::uint64_t count(std::size_t e, std::size_t q, Answer a) const {
    return counts(e, q)[index_of(a)];
  }

  // (c(e,q,a) + alpha) / (sum_a' c(e,q,a') + 3 alpha)
  double conditional(std::size_t e, std::size_t q, Answer a) const {
    return conditionals_[(e * questions_.size() + q) * kAnswerCount + index_of(a)];
  }
  double log_conditional(std::size_t e, std::size_t q, Answer a) const {
    return log_conditionals_[(e * questions_.size() + q) * kAnswerCount + index_of(a)];
  }

 private:
  Lexicon lexicon_;
  std::vector<CanonicalQuestion> questions_;
  std::unordered_map<std::string, std::size_t> question_index_;
  std::vector<AnswerCounts> counts_;
  std::vector<double> conditionals_;
  std::vector<double> log_conditionals_;
  double alpha_;
  int version_;
};

// By-name lookup. Throws LookupError for an unknown emotion or question id.
double answer_conditional(const KnowledgeBase& kb, std::string_view emotion,
                          std::string_view question_id, Answer a);

// Parses the KB JSON format. `source` names the input in error messages.
KnowledgeBase parse_kb(std::string_view json_text, std::string_view source = "<string>");
KnowledgeBase load_kb(const std::filesystem::path& path);

// Canonical JSON form of a KB (zero counts omitted).
std::string dump_kb(const KnowledgeBase& kb);

}  // namespace emo20q
