#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace decompound {

// Full binary tree of compound parts. The left child of a node is the
// modifier, the right child the head. Every node caches its surface, which
// for an internal node is the concatenation of its children's surfaces.
class ConstituentTree {
 public:
  static ConstituentTree leaf(std::string surface);
  static ConstituentTree node(ConstituentTree modifier, ConstituentTree head);

  // Parses the bracketed notation: a bare token is a leaf, `(l r)` a node.
  // Throws std::invalid_argument on malformed input.
  static ConstituentTree parse(std::string_view text);

  bool is_leaf() const { return children_.empty(); }
  const std::string& surface() const { return surface_; }
  const ConstituentTree& left() const;
  const ConstituentTree& right() const;

  // Leaves are at depth 0.
  std::size_t depth() const;
  std::size_t leaf_count() const;
  std::vector<std::string> leaves() const;

  // Canonical bracketed form, inverse of parse().
  std::string to_string() const;

  friend bool operator==(const ConstituentTree& a, const ConstituentTree& b);

 private:
  ConstituentTree() = default;
  void append_leaves(std::vector<std::string>& out) const;
  void append_to(std::string& out) const;

  std::string surface_;
  std::vector<ConstituentTree> children_;
};

}  // namespace decompound
