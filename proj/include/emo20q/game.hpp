#pragma once

#include <string>

#include "emo20q/core/answer.hpp"

namespace emo20q {

// A game allows at most this many questions and guesses per phase.
inline constexpr int kTurnBudget = 20;

// One question-answer turn. Guess turns use the id "guess:<word>".
struct QaEvent {
  std::string question_id;
  Answer answer = Answer::Other;
  std::string raw_question_text;
  std::string raw_answer_text;
  int turn = 1;

  friend bool operator==(const QaEvent&, const QaEvent&) = default;
};

inline std::string guess_question_id(const std::string& word) { return "guess:" + word; }

}  // namespace emo20q
