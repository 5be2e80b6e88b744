#include "emo20q/kb_tools.hpp"

#include <cmath>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "emo20q/core/error.hpp"

namespace emo20q {

KbValidation validate_kb_file(const std::filesystem::path& path) {
  KbValidation v;
  try {
    v.kb.emplace(load_kb(path));
  } catch (const Error& e) {
    v.problems.emplace_back(e.what());
    return v;
  }
  const KnowledgeBase& kb = *v.kb;
  for (std::size_t e = 0; e < kb.lexicon().size(); ++e)
    for (std::size_t q = 0; q < kb.question_count(); ++q) {
      double sum = 0.0;
      for (Answer a : kAllAnswers) sum += kb.conditional(e, q, a);
      if (std::abs(sum - 1.0) > 1e-9)
        v.problems.push_back("conditionals for (" + kb.lexicon().word(e) + ", " + kb.question(q).id +
                             ") sum to " + std::to_string(sum));
    }
  return v;
}

namespace {

struct Marginals {
  std::uint64_t yes = 0, no = 0, other = 0;
  std::uint64_t total() const { return yes + no + other; }
};

Marginals question_marginals(const KnowledgeBase& kb, std::size_t q) {
  Marginals m;
  for (std::size_t e = 0; e < kb.lexicon().size(); ++e) {
    m.yes += kb.count(e, q, Answer::Yes);
    m.no += kb.count(e, q, Answer::No);
    m.other += kb.count(e, q, Answer::Other);
  }
  return m;
}

}  // namespace

std::string kb_stats_text(const KnowledgeBase& kb) {
  Marginals all;
  for (std::size_t q = 0; q < kb.question_count(); ++q) {
    auto m = question_marginals(kb, q);
    all.yes += m.yes;
    all.no += m.no;
    all.other += m.other;
  }
  std::ostringstream out;
  out << "emotions   " << kb.lexicon().size() << "\n"
      << "questions  " << kb.question_count() << "\n"
      << "alpha      " << kb.alpha() << "\n"
      << "counts     " << all.total() << " (yes " << all.yes << ", no " << all.no << ", other "
      << all.other << ")\n\n";
  std::size_t width = 8;
  for (const auto& q : kb.questions()) width = std::max(width, q.id.size());
  out << std::left << std::setw(static_cast<int>(width)) << "question" << "    yes     no  other\n";
  out << std::fixed << std::setprecision(3);
  for (std::size_t q = 0; q < kb.question_count(); ++q) {
    auto m = question_marginals(kb, q);
    const double t = m.total() > 0 ? static_cast<double>(m.total()) : 1.0;
    out << std::left << std::setw(static_cast<int>(width)) << kb.question(q).id << std::right << "  "
        << std::setw(5) << m.yes / t << "  " << std::setw(5) << m.no / t << "  " << std::setw(5)
        << m.other / t << "\n";
  }
  return out.str();
}

std::string kb_stats_json(const KnowledgeBase& kb) {
  nlohmann::ordered_json questions = nlohmann::ordered_json::array();
  std::uint64_t total = 0;
  for (std::size_t q = 0; q < kb.question_count(); ++q) {
    auto m = question_marginals(kb, q);
    total += m.total();
    questions.push_back({{"id", kb.question(q).id},
                         {"yes", m.yes},
                         {"no", m.no},
                         {"other", m.other}});
  }
  nlohmann::ordered_json j = {{"emotions", kb.lexicon().size()},
                              {"questions", kb.question_count()},
                              {"alpha", kb.alpha()},
                              {"total_counts", total},
                              {"per_question", questions}};
  return j.dump(2) + "\n";
}

}  // namespace emo20q
