#include "decompound/tree.hpp"

#include <algorithm>
#include <stdexcept>

namespace decompound {

ConstituentTree ConstituentTree::leaf(std::string surface) {
  if (surface.empty()) {
    throw std::invalid_argument("constituent leaf must be non-empty");
  }
  ConstituentTree t;
  t.surface_ = std::move(surface);
  return t;
}

ConstituentTree ConstituentTree::node(ConstituentTree modifier, ConstituentTree head) {
  ConstituentTree t;
  t.surface_ = modifier.surface_ + head.surface_;
  t.children_.reserve(2);
  t.children_.push_back(std::move(modifier));
  t.children_.push_back(std::move(head));
  return t;
}

const ConstituentTree& ConstituentTree::left() const {
  if (is_leaf()) throw std::logic_error("leaf has no modifier");
  return children_[0];
}

const ConstituentTree& ConstituentTree::right() const {
  if (is_leaf()) throw std::logic_error("leaf has no head");
  return children_[1];
}

std::size_t ConstituentTree::depth() const {
  if (is_leaf()) return 0;
  return 1 + std::max(children_[0].depth(), children_[1].depth());
}

std::size_t ConstituentTree::leaf_count() const {
  if (is_leaf()) return 1;
  return children_[0].leaf_count() + children_[1].leaf_count();
}

void ConstituentTree::append_leaves(std::vector<std::string>& out) const {
  if (is_leaf()) {
    out.push_back(surface_);
    return;
  }
  children_[0].append_leaves(out);
  children_[1].append_leaves(out);
}

std::vector<std::string> ConstituentTree::leaves() const {
  std::vector<std::string> out;
  append_leaves(out);
  return out;
}

void ConstituentTree::append_to(std::string& out) const {
  if (is_leaf()) {
    out += surface_;
    return;
  }
  out += '(';
  children_[0].append_to(out);
  out += ' ';
  children_[1].append_to(out);
  out += ')';
}

std::string ConstituentTree::to_string() const {
  std::string out;
  append_to(out);
  return out;
}

bool operator==(const ConstituentTree& a, const ConstituentTree& b) {
  if (a.surface_ != b.surface_ || a.children_.size() != b.children_.size()) return false;
  for (std::size_t i = 0; i < a.children_.size(); ++i) {
    if (!(a.children_[i] == b.children_[i])) return false;
  }
  return true;
}

namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; }

class BracketParser {
 public:
  explicit BracketParser(std::string_view text) : text_(text) {}

  ConstituentTree parse_all() {
    ConstituentTree t = parse_item();
    skip_space();
    if (pos_ != text_.size()) {
      fail("trailing material after structure");
    }
    return t;
  }

 private:
  ConstituentTree parse_item() {
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end of structure");
    if (text_[pos_] == ')') fail("unbalanced ')'");
    if (text_[pos_] != '(') {
      const std::size_t start = pos_;
      while (pos_ < text_.size() && !is_space(text_[pos_]) && text_[pos_] != '(' &&
             text_[pos_] != ')') {
        ++pos_;
      }
      return ConstituentTree::leaf(std::string(text_.substr(start, pos_ - start)));
    }
    ++pos_;
    ConstituentTree modifier = parse_item();
    ConstituentTree head = parse_item();
    skip_space();
    if (pos_ >= text_.size()) fail("unbalanced '(': missing ')'");
    if (text_[pos_] != ')') fail("node must have exactly two children");
    ++pos_;
    return ConstituentTree::node(std::move(modifier), std::move(head));
  }

  void skip_space() {
    while (pos_ < text_.size() && is_space(text_[pos_])) ++pos_;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw std::invalid_argument(what + " at offset " + std::to_string(pos_) + " in '" +
                                std::string(text_) + "'");
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

ConstituentTree ConstituentTree::parse(std::string_view text) {
  return BracketParser(text).parse_all();
}

}  // namespace decompound
