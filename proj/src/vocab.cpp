#include "decompound/vocab.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#include "decompound/text.hpp"

namespace decompound::neural {

CharVocab::CharVocab(std::vector<char32_t> chars) : chars_(std::move(chars)) {
  for (std::size_t i = 0; i < chars_.size(); ++i) {
    if (!index_.emplace(chars_[i], static_cast<int>(i) + 2).second) {
      throw std::invalid_argument("duplicate character in vocabulary");
    }
  }
}

CharVocab CharVocab::from_forms(std::span<const std::string> forms) {
  std::set<char32_t> seen;
  for (const auto& f : forms) {
    for (char32_t c : to_u32(f)) seen.insert(c);
  }
  return CharVocab(std::vector<char32_t>(seen.begin(), seen.end()));
}

int CharVocab::index_of(char32_t c) const {
  const auto it = index_.find(c);
  return it == index_.end() ? kUnk : it->second;
}

}  // namespace decompound::neural
