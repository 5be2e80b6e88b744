#include "emo20q/core/answer.hpp"

namespace emo20q {

std::string_view to_string(Answer a) {
  switch (a) {
    case Answer::Yes:
      return "yes";
    case Answer::No:
      return "no";
    case Answer::Other:
      return "other";
  }
  return "other";
}

std::optional<Answer> parse_answer(std::string_view s) {
  if (s == "yes") return Answer::Yes;
  if (s == "no") return Answer::No;
  if (s == "other" || s == "maybe") return Answer::Other;
  return std::nullopt;
}

}  // namespace emo20q
