#include "decompound/lexicon.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <vector>

#include "decompound/text.hpp"

namespace decompound::baseline {

void PartLexicon::add_modifier(const std::string& modifier, std::uint64_t count) {
  modifiers_[modifier] += count;
  modifier_total_ += count;
}

void PartLexicon::add_head(const std::string& head, std::uint64_t count) {
  heads_[head] += count;
  head_total_ += count;
}

void PartLexicon::add_pair(const std::string& modifier, const std::string& head, std::uint64_t count) {
  pairs_[{modifier, head}] += count;
  pair_total_ += count;
}

void PartLexicon::add_node(const ConstituentTree& node) {
  if (node.is_leaf()) return;
  add_modifier(node.left().surface());
  add_head(node.right().surface());
  add_pair(node.left().surface(), node.right().surface());
  add_node(node.left());
  add_node(node.right());
}

void PartLexicon::add(const corpus::AnnotatedWord& word) {
  if (word.is_compound()) {
    add_node(word.structure);
  } else {
    add_head(word.form);
  }
}

std::uint64_t PartLexicon::modifier_count(std::string_view part) const {
  const auto it = modifiers_.find(part);
  return it == modifiers_.end() ? 0 : it->second;
}

std::uint64_t PartLexicon::head_count(std::string_view part) const {
  const auto it = heads_.find(part);
  return it == heads_.end() ? 0 : it->second;
}

std::uint64_t PartLexicon::pair_count(std::string_view modifier, std::string_view head) const {
  const auto it = pairs_.find({std::string(modifier), std::string(head)});
  return it == pairs_.end() ? 0 : it->second;
}

bool PartLexicon::is_known(std::string_view part) const {
  return modifiers_.contains(part) || heads_.contains(part);
}

PartLexicon build_lexicon(std::span<const corpus::AnnotatedWord> words) {
  PartLexicon lex;
  for (const auto& w : words) lex.add(w);
  return lex;
}

double pair_probability(std::string_view modifier, std::string_view head, const PartLexicon& lex) {
  if (const auto seen = lex.pair_count(modifier, head); seen > 0) {
    return static_cast<double>(seen) / static_cast<double>(lex.pair_total());
  }
  const auto m = lex.modifier_count(modifier);
  const auto h = lex.head_count(head);
  if (m == 0 || h == 0) return 0.0;
  return (static_cast<double>(m) / static_cast<double>(lex.modifier_total())) *
         (static_cast<double>(h) / static_cast<double>(lex.head_total()));
}

double base_score(std::string_view form, const PartLexicon& lex) {
  const auto h = lex.head_count(form);
  return h == 0 ? 0.0 : static_cast<double>(h) / static_cast<double>(lex.head_total());
}

double tree_score(const ConstituentTree& tree, const PartLexicon& lex) {
  if (tree.is_leaf()) return 1.0;
  return pair_probability(tree.left().surface(), tree.right().surface(), lex) *
         tree_score(tree.left(), lex) * tree_score(tree.right(), lex);
}

namespace {

struct Cell {
  bool feasible = false;
  double score = 0.0;
  std::size_t leaves = 0;
  std::string bracketing;
  std::size_t split = 0;  // 0: leaf
};

// Strict "a is better than b".
bool better(double score_a, std::size_t leaves_a, const std::string& br_a, const Cell& b) {
  if (!b.feasible) return true;
  if (score_a != b.score) return score_a > b.score;
  if (leaves_a != b.leaves) return leaves_a < b.leaves;
  return br_a < b.bracketing;
}

ConstituentTree build(const std::vector<std::vector<Cell>>& cells, const std::u32string& chars,
                      std::size_t i, std::size_t j) {
  const Cell& c = cells[i][j];
  if (c.split == 0) return ConstituentTree::leaf(to_utf8(std::u32string_view(chars).substr(i, j - i)));
  return ConstituentTree::node(build(cells, chars, i, c.split), build(cells, chars, c.split, j));
}

}  // namespace

std::optional<ScoredTree> best_structure(std::string_view form, const PartLexicon& lex) {
  const std::u32string chars = to_u32(form);
  const std::size_t n = chars.size();
  if (n < 2) return std::nullopt;

  std::vector<std::vector<std::string>> surface(n + 1, std::vector<std::string>(n + 1));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j <= n; ++j) {
      surface[i][j] = to_utf8(std::u32string_view(chars).substr(i, j - i));
    }
  }

  // cells[i][j]: best analysis of the span [i, j). The whole word (0, n)
  // is handled separately: it may not be a bare leaf.
  std::vector<std::vector<Cell>> cells(n + 1, std::vector<Cell>(n + 1));
  for (std::size_t len = 1; len <= n; ++len) {
    for (std::size_t i = 0; i + len <= n; ++i) {
      const std::size_t j = i + len;
      Cell& cell = cells[i][j];
      const bool root = i == 0 && j == n;
      if (!root && lex.is_known(surface[i][j])) {
        cell = Cell{true, 1.0, 1, surface[i][j], 0};
      }
      for (std::size_t k = i + 1; k < j; ++k) {
        const Cell& l = cells[i][k];
        const Cell& r = cells[k][j];
        if (!l.feasible || !r.feasible) continue;
        const double score = pair_probability(surface[i][k], surface[k][j], lex) * l.score * r.score;
        if (!(score > 0.0)) continue;
        const std::size_t leaves = l.leaves + r.leaves;
        std::string br = "(" + l.bracketing + " " + r.bracketing + ")";
        if (better(score, leaves, br, cell)) {
          cell = Cell{true, score, leaves, std::move(br), k};
        }
      }
    }
  }

  const Cell& top = cells[0][n];
  if (!top.feasible) return std::nullopt;
  if (top.score <= base_score(form, lex)) return std::nullopt;
  return ScoredTree{build(cells, chars, 0, n), top.score};
}

void write_lexicon(std::ostream& out, const PartLexicon& lex) {
  out << kLexiconHeader << '\n' << "[modifiers]\n";
  for (const auto& [part, count] : lex.modifiers()) out << part << '\t' << count << '\n';
  out << "[heads]\n";
  for (const auto& [part, count] : lex.heads()) out << part << '\t' << count << '\n';
  out << "[pairs]\n";
  for (const auto& [pair, count] : lex.pairs()) {
    out << pair.first << '\t' << pair.second << '\t' << count << '\n';
  }
}

namespace {

std::uint64_t parse_count(std::string_view s, const std::string& source, std::size_t line_no) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty() || v == 0) {
    throw corpus::ParseError(source, line_no, "count '" + std::string(s) + "' is not a positive integer");
  }
  return v;
}

}  // namespace

PartLexicon read_lexicon(std::istream& in, const std::string& source) {
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) throw corpus::ParseError(source, 1, "empty lexicon file");
  ++line_no;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kLexiconHeader) {
    throw corpus::ParseError(source, line_no, "unsupported lexicon header '" + line + "'");
  }
  enum class Section { none, modifiers, heads, pairs } section = Section::none;
  PartLexicon lex;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    if (line == "[modifiers]") { section = Section::modifiers; continue; }
    if (line == "[heads]") { section = Section::heads; continue; }
    if (line == "[pairs]") { section = Section::pairs; continue; }
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
      const auto tab = line.find('\t', start);
      fields.push_back(line.substr(start, tab - start));
      if (tab == std::string::npos) break;
      start = tab + 1;
    }
    switch (section) {
      case Section::none:
        throw corpus::ParseError(source, line_no, "entry outside of a section");
      case Section::modifiers:
      case Section::heads:
        if (fields.size() != 2 || fields[0].empty()) {
          throw corpus::ParseError(source, line_no, "expected part<TAB>count");
        }
        if (section == Section::modifiers) {
          lex.add_modifier(fields[0], parse_count(fields[1], source, line_no));
        } else {
          lex.add_head(fields[0], parse_count(fields[1], source, line_no));
        }
        break;
      case Section::pairs:
        if (fields.size() != 3 || fields[0].empty() || fields[1].empty()) {
          throw corpus::ParseError(source, line_no, "expected modifier<TAB>head<TAB>count");
        }
        if (lex.modifier_count(fields[0]) == 0 || lex.head_count(fields[1]) == 0) {
          throw corpus::ParseError(source, line_no, "pair parts must be listed as modifier and head");
        }
        lex.add_pair(fields[0], fields[1], parse_count(fields[2], source, line_no));
        break;
    }
  }
  return lex;
}

void save_lexicon(const std::filesystem::path& path, const PartLexicon& lex) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  write_lexicon(out, lex);
}

PartLexicon load_lexicon(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open lexicon file " + path.string());
  return read_lexicon(in, path.string());
}

}  // namespace decompound::baseline
