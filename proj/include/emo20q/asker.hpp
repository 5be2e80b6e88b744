#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "emo20q/core/knowledge_base.hpp"
#include "emo20q/core/posterior.hpp"
#include "emo20q/game.hpp"
#include "emo20q/nlu.hpp"

namespace emo20q {

struct AskerPolicy {
  double guess_threshold = 0.5;  // guess once the top word holds this much mass
  int guard_turns = 2;           // always guess when this few turns remain
  // Questions whose expected gain is at or below this are treated as uninformative.
  double min_gain = 1e-9;
};

struct AskQuestion {
  std::string question_id;
  friend bool operator==(const AskQuestion&, const AskQuestion&) = default;
};
struct MakeGuess {
  std::string emotion;
  friend bool operator==(const MakeGuess&, const MakeGuess&) = default;
};
struct Concede {
  friend bool operator==(const Concede&, const Concede&) = default;
};

using AskerAction = std::variant<AskQuestion, MakeGuess, Concede>;

enum class AskerStatus { Playing, Won, Conceded };

struct AskerState {
  Posterior posterior;
  std::set<std::string> asked;
  std::set<std::string> rejected_guesses;
  int turn = 0;  // turns consumed so far, never above kTurnBudget
  AskerStatus status = AskerStatus::Playing;
  std::vector<QaEvent> history;

  int remaining_turns() const { return kTurnBudget - turn; }
  friend bool operator==(const AskerState&, const AskerState&) = default;
};

AskerState new_asker(const KnowledgeBase& kb);

// H(p) − Σ_a P(a|q) H(p | q, a), clamped at zero.
double expected_information_gain(const Posterior& p, const KnowledgeBase& kb, std::size_t question);

// Unasked question with the highest gain; ties (within 1e-12 bits) go to the
// smallest id. Empty when every question has been asked.
std::optional<std::string> select_question(const AskerState& st, const KnowledgeBase& kb);

AskerAction decide_action(const AskerState& st, const KnowledgeBase& kb,
                          const AskerPolicy& policy = {});

// Applies an already-bucketed reply to the last emitted action. A guess
// answered with Other leaves the state untouched (the caller re-prompts).
AskerState observe_answer(const AskerState& st, const KnowledgeBase& kb,
                          const AskerAction& action, Answer answer,
                          std::string_view raw_question = {}, std::string_view raw_reply = {});

AskerState observe(const AskerState& st, const KnowledgeBase& kb, const Nlu& nlu,
                   const AskerAction& action, std::string_view user_reply,
                   std::string_view raw_question = {});

std::string describe(const AskerAction& action);

}  // namespace emo20q
