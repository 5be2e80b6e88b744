#pragma once

#include <filesystem>
#include <memory>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "emo20q/core/knowledge_base.hpp"
#include "emo20q/dialog.hpp"
#include "emo20q/nlu.hpp"

namespace emo20q::testing {

std::filesystem::path data_dir();       // repo data/
std::filesystem::path test_data_dir();  // tests/data/

std::shared_ptr<const KnowledgeBase> small_kb();  // tests/data/kb_small.json
std::shared_ptr<const KnowledgeBase> seed_kb();   // data/kb/seed_kb.json
std::shared_ptr<const Nlu> shipped_nlu();

// 2^bits emotions e00..; question "group.<k>" is answered yes exactly by the
// emotions whose bit k is set, so the bits questions identify every emotion.
// Distractor questions get the same counts for every emotion.
KnowledgeBase separable_kb(int bits = 5, int distractors = 5, double alpha = 1e-6);

// Emotions "e0".., questions "q0"..; every (e,q,a) count uniform in [0, max_count].
KnowledgeBase random_kb(std::mt19937_64& gen, int emotions, int questions, int max_count,
                        double alpha = 1.0);

std::shared_ptr<const GameContext> context_for(std::shared_ptr<const KnowledgeBase> kb);

// ---------------------------------------------------------------------------
// Brute-force oracles. Written independently of the library arithmetic: linear
// space, long double, straight from the definitions.

// Smoothed conditional recomputed from raw counts.
long double oracle_conditional(const KnowledgeBase& kb, std::size_t e, std::size_t q, Answer a);

// p0(e) · Π P(a_i|e,q_i) / Z, in one pass.
std::vector<double> oracle_posterior(const KnowledgeBase& kb, const std::vector<double>& prior,
                                     const std::vector<std::pair<std::size_t, Answer>>& updates);

// Expected information gain as the mutual information between the emotion and
// the answer: Σ_e Σ_a p(e) P(a|e) log2(P(a|e) / P(a)).
double oracle_information_gain(const KnowledgeBase& kb, const std::vector<double>& p, std::size_t q);

// Most probable answer by smoothed conditional; any tie at the top is Other.
Answer oracle_kb_answer(const KnowledgeBase& kb, std::size_t e, std::size_t q);

// Fresh empty directory under the system temp dir.
std::filesystem::path temp_dir(const std::string& tag);

}  // namespace emo20q::testing
