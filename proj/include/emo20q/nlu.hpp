#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "emo20q/core/answer.hpp"
#include "emo20q/core/knowledge_base.hpp"
#include "emo20q/core/lexicon.hpp"

namespace emo20q {

using Tokens = std::vector<std::string>;

struct MatchResult {
  std::optional<std::string> question_id;  // set iff score >= threshold
  double score = 0.0;
  std::string matched_surface;
};

// Cue phrases for bucketing free-text answers. Each cue is one or more
// space-separated tokens matched as a contiguous run.
struct CueLexicon {
  std::vector<Tokens> yes;
  std::vector<Tokens> no;
  // Hedges ("not sure", "maybe") are checked before the no-cues so that an
  // uncertain reply is not read as a denial.
  std::vector<Tokens> other;
};

// Text normalization and matching over swappable stopword and cue tables.
// Immutable after construction; all methods are const and thread-safe.
class Nlu {
 public:
  static constexpr double kDefaultMatchThreshold = 0.5;

  Nlu(std::unordered_set<std::string> stopwords, CueLexicon cues,
      double match_threshold = kDefaultMatchThreshold);

  // Loads `stopwords.txt` and `cues.json` from a directory.
  static Nlu load(const std::filesystem::path& dir, double match_threshold = kDefaultMatchThreshold);

  double match_threshold() const { return threshold_; }

  // Lowercase, punctuation stripped, whitespace split. No stopword removal.
  static Tokens tokenize(std::string_view s);

  // tokenize() followed by stopword removal; "no" and "not" always survive.
  Tokens normalize_text(std::string_view s) const;

  // no-hedge cues → Other; no-cues → No; yes-cues → Yes; otherwise Other.
  Answer bucket_answer(std::string_view s) const;

  // Best Jaccard overlap against every gloss and paraphrase; ties go to the
  // smallest question id.
  MatchResult match_question(std::string_view s, const KnowledgeBase& kb) const;

  // Returns the guessed word if `s` is a guess template ("is it X", "X?",
  // bare "X", ...) whose slot is a lexicon word.
  std::optional<std::string> detect_guess(std::string_view s, const Lexicon& lexicon) const;

 private:
  std::unordered_set<std::string> stopwords_;
  CueLexicon cues_;
  double threshold_;
};

// Jaccard similarity of two token sets; two empty sets score 0.
double jaccard(const Tokens& a, const Tokens& b);

}  // namespace emo20q
