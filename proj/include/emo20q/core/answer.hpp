#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string_view>

namespace emo20q {

enum class Answer { Yes = 0, No = 1, Other = 2 };

inline constexpr std::size_t kAnswerCount = 3;
inline constexpr std::array<Answer, kAnswerCount> kAllAnswers = {Answer::Yes, Answer::No,
                                                                 Answer::Other};

constexpr std::size_t index_of(Answer a) { return static_cast<std::size_t>(a); }

// "yes" | "no" | "other"
std::string_view to_string(Answer a);

// Accepts "yes", "no", "other" and the classifier label "maybe" (which maps to Other).
std::optional<Answer> parse_answer(std::string_view s);

}  // namespace emo20q
