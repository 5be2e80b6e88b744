#include "emo20q/asker.hpp"

#include <algorithm>
#include <cmath>

#include "emo20q/core/error.hpp"

namespace emo20q {

namespace {

constexpr double kTieTolerance = 1e-12;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

}  // namespace

AskerState new_asker(const KnowledgeBase& kb) {
  AskerState st;
  st.posterior = uniform_prior(kb.lexicon());
  return st;
}

double expected_information_gain(const Posterior& p, const KnowledgeBase& kb,
                                 std::size_t question) {
  const std::vector<double> prior = p.probs();
  double expected_after = 0.0;
  std::vector<double> joint(prior.size());
  for (Answer a : kAllAnswers) {
    double mass = 0.0;
    for (std::size_t e = 0; e < prior.size(); ++e) {
      joint[e] = prior[e] * kb.conditional(e, question, a);
      mass += joint[e];
    }
    if (mass <= 0.0) continue;
    double h = 0.0;
    for (double w : joint) {
      if (w <= 0.0) continue;
      const double r = w / mass;
      h -= r * std::log2(r);
    }
    expected_after += mass * h;
  }
  return std::max(0.0, entropy(p) - expected_after);
}

std::optional<std::string> select_question(const AskerState& st, const KnowledgeBase& kb) {
  std::vector<std::size_t> order(kb.question_count());
  for (std::size_t q = 0; q < order.size(); ++q) order[q] = q;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return kb.question(a).id < kb.question(b).id; });

  std::optional<std::size_t> best;
  double best_gain = 0.0;
  for (std::size_t q : order) {
    if (st.asked.contains(kb.question(q).id)) continue;
    const double gain = expected_information_gain(st.posterior, kb, q);
    if (!best || gain > best_gain + kTieTolerance) {
      best = q;
      best_gain = gain;
    }
  }
  if (!best) return std::nullopt;
  return kb.question(*best).id;
}

AskerAction decide_action(const AskerState& st, const KnowledgeBase& kb, const AskerPolicy& policy) {
  if (st.status != AskerStatus::Playing || st.turn >= kTurnBudget) return Concede{};
  if (st.rejected_guesses.size() >= kb.lexicon().size()) return Concede{};

  const std::size_t top = argmax(st.posterior, kb.lexicon());
  const std::string& top_word = kb.lexicon().word(top);
  if (st.posterior.prob(top) >= policy.guess_threshold ||
      st.remaining_turns() <= policy.guard_turns)
    return MakeGuess{top_word};

  auto q = select_question(st, kb);
  if (!q) return MakeGuess{top_word};
  if (expected_information_gain(st.posterior, kb, kb.question_index(*q)) <= policy.min_gain)
    return MakeGuess{top_word};
  return AskQuestion{*q};
}

AskerState observe_answer(const AskerState& st, const KnowledgeBase& kb, const AskerAction& action,
                          Answer answer, std::string_view raw_question, std::string_view raw_reply) {
  if (st.status != AskerStatus::Playing) return st;
  AskerState next = st;
  auto record = [&](std::string id) {
    next.history.push_back(QaEvent{std::move(id), answer, std::string(raw_question),
                                   std::string(raw_reply), next.turn});
  };

  std::visit(
      overloaded{
          [&](const AskQuestion& ask) {
            if (next.turn >= kTurnBudget) return;
            next.posterior = bayes_update(st.posterior, kb, ask.question_id, answer);
            next.asked.insert(ask.question_id);
            ++next.turn;
            record(ask.question_id);
          },
          [&](const MakeGuess& guess) {
            if (answer == Answer::Other || next.turn >= kTurnBudget) return;
            const std::size_t e = kb.lexicon().index_of(guess.emotion);
            ++next.turn;
            record(guess_question_id(guess.emotion));
            if (answer == Answer::Yes) {
              next.status = AskerStatus::Won;
              return;
            }
            next.rejected_guesses.insert(guess.emotion);
            if (next.rejected_guesses.size() >= kb.lexicon().size()) {
              next.status = AskerStatus::Conceded;
              return;
            }
            next.posterior = zero_out(st.posterior, e);
          },
          [&](const Concede&) { next.status = AskerStatus::Conceded; },
      },
      action);
  return next;
}

AskerState observe(const AskerState& st, const KnowledgeBase& kb, const Nlu& nlu,
                   const AskerAction& action, std::string_view user_reply,
                   std::string_view raw_question) {
  return observe_answer(st, kb, action, nlu.bucket_answer(user_reply), raw_question, user_reply);
}

std::string describe(const AskerAction& action) {
  return std::visit(overloaded{
                        [](const AskQuestion& a) { return "ask " + a.question_id; },
                        [](const MakeGuess& g) { return "guess " + g.emotion; },
                        [](const Concede&) { return std::string("concede"); },
                    },
                    action);
}

}  // namespace emo20q
