#include "emo20q/core/lexicon.hpp"

#include <algorithm>
#include <cctype>

#include "emo20q/core/error.hpp"

namespace emo20q {

namespace {

bool is_normalized(const std::string& w) {
  if (w.empty()) return false;
  if (std::isspace(static_cast<unsigned char>(w.front())) ||
      std::isspace(static_cast<unsigned char>(w.back())))
    return false;
  return std::none_of(w.begin(), w.end(),
                      [](unsigned char c) { return std::isupper(c) != 0; });
}

}  // namespace

Lexicon::Lexicon(std::vector<std::string> words) : words_(std::move(words)) {
  if (words_.empty()) throw ValidationError("lexicon: emotions list is empty");
  for (std::size_t i = 0; i < words_.size(); ++i) {
    const auto& w = words_[i];
    if (!is_normalized(w))
      throw ValidationError("lexicon: emotion \"" + w + "\" is not lowercase and trimmed");
    if (!index_.emplace(w, i).second)
      throw ValidationError("lexicon: duplicate emotion \"" + w + "\"");
  }
}

std::optional<std::size_t> Lexicon::find(std::string_view w) const {
  auto it = index_.find(std::string(w));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t Lexicon::index_of(std::string_view w) const {
  if (auto i = find(w)) return *i;
  throw LookupError("unknown emotion \"" + std::string(w) + "\"");
}

}  // namespace emo20q
