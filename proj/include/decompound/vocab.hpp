#pragma once

#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace decompound::neural {

// Dense character inventory. Index 0 is padding, index 1 the unknown
// character; observed characters follow in code-point order.
class CharVocab {
 public:
  static constexpr int kPad = 0;
  static constexpr int kUnk = 1;

  CharVocab() = default;
  explicit CharVocab(std::vector<char32_t> chars);

  static CharVocab from_forms(std::span<const std::string> forms);

  std::size_t size() const { return chars_.size() + 2; }
  int index_of(char32_t c) const;
  // Characters in index order, starting at index 2.
  const std::vector<char32_t>& chars() const { return chars_; }

  friend bool operator==(const CharVocab& a, const CharVocab& b) { return a.chars_ == b.chars_; }

 private:
  std::vector<char32_t> chars_;
  std::unordered_map<char32_t, int> index_;
};

}  // namespace decompound::neural
