#include "decompound/splitter.hpp"

#include "decompound/text.hpp"

namespace decompound {

namespace {

ConstituentTree derive(const BinarySplitter& splitter, const std::u32string& chars,
                       std::size_t depth_left) {
  std::string form = to_utf8(chars);
  if (depth_left == 0 || chars.size() < 2) return ConstituentTree::leaf(std::move(form));
  const auto p = splitter.split(form);
  if (!p) return ConstituentTree::leaf(std::move(form));
  if (*p < 1 || *p >= chars.size()) {
    throw SplitterContractError("splitter returned position " + std::to_string(*p) + " for '" +
                                form + "' of length " + std::to_string(chars.size()));
  }
  return ConstituentTree::node(derive(splitter, chars.substr(0, *p), depth_left - 1),
                               derive(splitter, chars.substr(*p), depth_left - 1));
}

}  // namespace

ConstituentTree derive_tree(const BinarySplitter& splitter, std::string_view form,
                            std::size_t max_depth) {
  if (form.empty()) throw std::invalid_argument("derive_tree: empty form");
  if (max_depth < 1) throw std::invalid_argument("derive_tree: max_depth must be >= 1");
  return derive(splitter, to_u32(form), max_depth);
}

std::optional<std::size_t> NeuralSplitter::split(std::string_view form) const {
  return model_.predict_split(form);
}

std::optional<std::size_t> LexiconSplitter::split(std::string_view form) const {
  const auto best = baseline::best_structure(form, lexicon_);
  if (!best) return std::nullopt;
  return char_length(best->tree.left().surface());
}

}  // namespace decompound
