#include "emo20q/core/posterior.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "emo20q/core/error.hpp"

namespace emo20q {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Shifts log weights so they sum to one in linear space.
void normalize_log(std::vector<double>& lw) {
  const double mx = *std::max_element(lw.begin(), lw.end());
  if (mx == kNegInf) throw DegeneratePosteriorError("posterior has zero total mass");
  double sum = 0.0;
  for (double v : lw) sum += std::exp(v - mx);
  const double log_z = mx + std::log(sum);
  for (double& v : lw) v = (v == kNegInf) ? kNegInf : v - log_z;
}

}  // namespace

Posterior Posterior::from_weights(std::span<const double> weights) {
  std::vector<double> lw;
  lw.reserve(weights.size());
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w))
      throw ValidationError("posterior weights must be finite and non-negative");
    lw.push_back(w == 0.0 ? kNegInf : std::log(w));
  }
  return from_log_weights(std::move(lw));
}

Posterior Posterior::from_log_weights(std::vector<double> log_weights, std::vector<bool> excluded) {
  if (log_weights.empty()) throw ValidationError("posterior over an empty lexicon");
  if (excluded.empty()) excluded.assign(log_weights.size(), false);
  if (excluded.size() != log_weights.size())
    throw ValidationError("posterior exclusion mask has the wrong size");
  for (std::size_t i = 0; i < log_weights.size(); ++i)
    if (excluded[i]) log_weights[i] = kNegInf;
  normalize_log(log_weights);
  Posterior p;
  p.log_probs_ = std::move(log_weights);
  p.excluded_ = std::move(excluded);
  return p;
}

double Posterior::prob(std::size_t i) const { return std::exp(log_probs_.at(i)); }

std::vector<double> Posterior::probs() const {
  std::vector<double> out(log_probs_.size());
  std::transform(log_probs_.begin(), log_probs_.end(), out.begin(),
                 [](double v) { return std::exp(v); });
  return out;
}

std::map<std::string, double> Posterior::by_word(const Lexicon& lexicon) const {
  std::map<std::string, double> out;
  for (std::size_t i = 0; i < size(); ++i) out.emplace(lexicon.word(i), prob(i));
  return out;
}

Posterior uniform_prior(const Lexicon& lexicon) {
  if (lexicon.empty()) throw ValidationError("uniform prior over an empty lexicon");
  const double lp = -std::log(static_cast<double>(lexicon.size()));
  return Posterior::from_log_weights(std::vector<double>(lexicon.size(), lp));
}

Posterior bayes_update(const Posterior& p, const KnowledgeBase& kb, std::size_t question,
                       Answer a) {
  if (p.size() != kb.lexicon().size())
    throw ValidationError("posterior size does not match the knowledge base lexicon");
  if (question >= kb.question_count()) throw LookupError("question index out of range");
  std::vector<double> lw(p.size());
  for (std::size_t e = 0; e < p.size(); ++e)
    lw[e] = p.log_prob(e) + kb.log_conditional(e, question, a);
  return Posterior::from_log_weights(std::move(lw), p.excluded_mask());
}

Posterior bayes_update(const Posterior& p, const KnowledgeBase& kb, std::string_view question_id,
                       Answer a) {
  return bayes_update(p, kb, kb.question_index(question_id), a);
}

double entropy(const Posterior& p) {
  double h = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double lp = p.log_prob(i);
    if (lp == kNegInf) continue;
    h -= std::exp(lp) * lp;
  }
  return h / std::log(2.0);
}

Posterior zero_out(const Posterior& p, std::size_t emotion) {
  if (emotion >= p.size()) throw LookupError("emotion index out of range");
  std::vector<bool> excluded = p.excluded_mask();
  excluded[emotion] = true;

  std::vector<double> lw(p.size());
  bool any_mass = false;
  for (std::size_t i = 0; i < p.size(); ++i) {
    lw[i] = excluded[i] ? kNegInf : p.log_prob(i);
    any_mass = any_mass || lw[i] != kNegInf;
  }
  if (!any_mass) {
    bool any_left = false;
    for (std::size_t i = 0; i < p.size(); ++i) {
      lw[i] = excluded[i] ? kNegInf : 0.0;
      any_left = any_left || !excluded[i];
    }
    if (!any_left) throw DegeneratePosteriorError("every word has been zeroed out");
  }
  return Posterior::from_log_weights(std::move(lw), std::move(excluded));
}

std::size_t argmax(const Posterior& p, const Lexicon& lexicon) {
  std::size_t best = p.size();
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p.excluded(i)) continue;
    if (best == p.size() || p.log_prob(i) > p.log_prob(best) ||
        (p.log_prob(i) == p.log_prob(best) && lexicon.word(i) < lexicon.word(best)))
      best = i;
  }
  if (best == p.size()) throw DegeneratePosteriorError("every word has been zeroed out");
  return best;
}

}  // namespace emo20q
