#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace emo20q {

// Closed, ordered set of guessable emotion words. Index order is the file order.
class Lexicon {
 public:
  Lexicon() = default;

  // Throws ValidationError if empty, duplicated, or not lowercase/trimmed.
  explicit Lexicon(std::vector<std::string> words);

  std::size_t size() const { return words_.size(); }
  bool empty() const { return words_.empty(); }
  const std::string& word(std::size_t i) const { return words_.at(i); }
  const std::vector<std::string>& words() const { return words_; }

  std::optional<std::size_t> find(std::string_view w) const;
  // Throws LookupError for unknown words.
  std::size_t index_of(std::string_view w) const;
  bool contains(std::string_view w) const { return find(w).has_value(); }

  auto begin() const { return words_.begin(); }
  auto end() const { return words_.end(); }

 private:
  std::vector<std::string> words_;
  std::unordered_map<std::string, std::size_t> index_;
};

}  // namespace emo20q
