#include "testing/fixtures.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <unistd.h>

namespace emo20q::testing {

std::filesystem::path data_dir() { return EMO20Q_DATA_DIR; }
std::filesystem::path test_data_dir() { return EMO20Q_TEST_DATA_DIR; }

std::shared_ptr<const KnowledgeBase> small_kb() {
  static auto kb = std::make_shared<const KnowledgeBase>(load_kb(test_data_dir() / "kb_small.json"));
  return kb;
}

std::shared_ptr<const KnowledgeBase> seed_kb() {
  static auto kb = std::make_shared<const KnowledgeBase>(load_kb(data_dir() / "kb" / "seed_kb.json"));
  return kb;
}

std::shared_ptr<const Nlu> shipped_nlu() {
  static auto nlu = std::make_shared<const Nlu>(Nlu::load(data_dir() / "nlu"));
  return nlu;
}

namespace {

const char* kGroupNames[] = {"alpha", "beta", "gamma", "delta", "epsilon", "zeta", "eta", "theta"};
const char* kDistractorNames[] = {"red", "green", "blue", "cyan", "magenta", "yellow", "black", "white"};

}  // namespace

KnowledgeBase separable_kb(int bits, int distractors, double alpha) {
  std::vector<std::string> words;
  const int n = 1 << bits;
  for (int i = 0; i < n; ++i) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "e%02d", i);
    words.emplace_back(buf);
  }
  std::vector<CanonicalQuestion> questions;
  std::vector<CountEntry> counts;
  for (int b = 0; b < bits; ++b) {
    const std::string id = std::string("group.") + kGroupNames[b];
    questions.push_back({id, std::string("is it in group ") + kGroupNames[b] + "?", {}});
    for (int i = 0; i < n; ++i)
      counts.push_back({words[i], id, (i >> b) & 1 ? Answer::Yes : Answer::No, 10});
  }
  for (int d = 0; d < distractors; ++d) {
    const std::string id = std::string("noise.") + kDistractorNames[d];
    questions.push_back({id, std::string("does it smell like ") + kDistractorNames[d] + " paint?", {}});
    for (int i = 0; i < n; ++i) {
      counts.push_back({words[i], id, Answer::Yes, 5});
      counts.push_back({words[i], id, Answer::No, 5});
    }
  }
  return KnowledgeBase(Lexicon(std::move(words)), std::move(questions), counts, alpha);
}

KnowledgeBase random_kb(std::mt19937_64& gen, int emotions, int questions, int max_count,
                        double alpha) {
  std::uniform_int_distribution<int> count(0, max_count);
  std::vector<std::string> words;
  for (int e = 0; e < emotions; ++e) words.push_back("e" + std::to_string(e));
  std::vector<CanonicalQuestion> qs;
  for (int q = 0; q < questions; ++q)
    qs.push_back({"q" + std::to_string(q), "question number " + std::to_string(q), {}});
  std::vector<CountEntry> counts;
  for (int e = 0; e < emotions; ++e)
    for (int q = 0; q < questions; ++q)
      for (Answer a : kAllAnswers)
        counts.push_back({words[e], qs[q].id, a, static_cast<std::uint64_t>(count(gen))});
  return KnowledgeBase(Lexicon(std::move(words)), std::move(qs), counts, alpha);
}

std::shared_ptr<const GameContext> context_for(std::shared_ptr<const KnowledgeBase> kb) {
  return make_context(std::move(kb), data_dir());
}

long double oracle_conditional(const KnowledgeBase& kb, std::size_t e, std::size_t q, Answer a) {
  const long double alpha = kb.alpha();
  long double total = 0;
  for (Answer b : kAllAnswers) total += kb.count(e, q, b);
  return (kb.count(e, q, a) + alpha) / (total + 3 * alpha);
}

std::vector<double> oracle_posterior(const KnowledgeBase& kb, const std::vector<double>& prior,
                                     const std::vector<std::pair<std::size_t, Answer>>& updates) {
  const auto n = kb.lexicon().size();
  std::vector<long double> w(n);
  long double z = 0;
  for (std::size_t e = 0; e < n; ++e) {
    w[e] = prior[e];
    for (auto [q, a] : updates) w[e] *= oracle_conditional(kb, e, q, a);
    z += w[e];
  }
  std::vector<double> out(n);
  for (std::size_t e = 0; e < n; ++e) out[e] = static_cast<double>(w[e] / z);
  return out;
}

double oracle_information_gain(const KnowledgeBase& kb, const std::vector<double>& p, std::size_t q) {
  const auto n = kb.lexicon().size();
  long double mi = 0;
  for (Answer a : kAllAnswers) {
    long double pa = 0;
    for (std::size_t e = 0; e < n; ++e) pa += p[e] * oracle_conditional(kb, e, q, a);
    for (std::size_t e = 0; e < n; ++e) {
      if (p[e] == 0) continue;
      const long double c = oracle_conditional(kb, e, q, a);
      mi += p[e] * c * std::log2(c / pa);
    }
  }
  return static_cast<double>(mi);
}

Answer oracle_kb_answer(const KnowledgeBase& kb, std::size_t e, std::size_t q) {
  const long double y = oracle_conditional(kb, e, q, Answer::Yes);
  const long double n = oracle_conditional(kb, e, q, Answer::No);
  const long double o = oracle_conditional(kb, e, q, Answer::Other);
  if (y > n && y > o) return Answer::Yes;
  if (n > y && n > o) return Answer::No;
  if (o > y && o > n) return Answer::Other;
  return Answer::Other;
}

std::filesystem::path temp_dir(const std::string& tag) {
  static std::atomic<int> counter{0};
  const auto stamp = std::chrono::steady_clock::now().time_since_epoch().count();
  auto dir = std::filesystem::temp_directory_path() /
             ("emo20q-" + tag + "-" + std::to_string(::getpid()) + "-" + std::to_string(stamp) + "-" +
              std::to_string(counter++));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace emo20q::testing
