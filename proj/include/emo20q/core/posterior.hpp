#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "emo20q/core/answer.hpp"
#include "emo20q/core/knowledge_base.hpp"
#include "emo20q/core/lexicon.hpp"

namespace emo20q {

// Distribution over lexicon indices. Stored as normalized log-probabilities so
// long update chains do not underflow; accessors return linear values.
//
// Words removed by zero_out() are remembered as excluded; they keep zero mass
// and are skipped by the exhausted-mass fallback.
class Posterior {
 public:
  Posterior() = default;

  // Normalizes the given non-negative weights. Throws DegeneratePosteriorError
  // when they sum to zero and ValidationError on negative or non-finite input.
  static Posterior from_weights(std::span<const double> weights);
  static Posterior from_log_weights(std::vector<double> log_weights,
                                    std::vector<bool> excluded = {});

  std::size_t size() const { return log_probs_.size(); }
  double prob(std::size_t i) const;
  double log_prob(std::size_t i) const { return log_probs_.at(i); }
  std::vector<double> probs() const;
  bool excluded(std::size_t i) const { return excluded_.at(i); }
  const std::vector<bool>& excluded_mask() const { return excluded_; }

  std::map<std::string, double> by_word(const Lexicon& lexicon) const;

  friend bool operator==(const Posterior&, const Posterior&) = default;

 private:
  std::vector<double> log_probs_;
  std::vector<bool> excluded_;
};

Posterior uniform_prior(const Lexicon& lexicon);

// p'(e) ∝ p(e) · P(a|e,q). Input is unchanged.
Posterior bayes_update(const Posterior& p, const KnowledgeBase& kb, std::size_t question,
                       Answer a);
Posterior bayes_update(const Posterior& p, const KnowledgeBase& kb,
                       std::string_view question_id, Answer a);

// Shannon entropy in bits, with 0·log 0 = 0.
double entropy(const Posterior& p);

// Removes all mass from `emotion` and renormalizes. If it held all the mass the
// result is uniform over the words never zeroed out before. Throws
// DegeneratePosteriorError when no such word remains.
Posterior zero_out(const Posterior& p, std::size_t emotion);

// Index of the most probable word that is not excluded; ties go to the
// lexicographically smallest word.
std::size_t argmax(const Posterior& p, const Lexicon& lexicon);

}  // namespace emo20q
