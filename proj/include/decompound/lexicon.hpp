#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>

#include "decompound/corpus.hpp"
#include "decompound/tree.hpp"

namespace decompound::baseline {

// Frequency tables of compound parts by role, learned from gold trees.
class PartLexicon {
 public:
  using CountMap = std::map<std::string, std::uint64_t, std::less<>>;
  using PairMap = std::map<std::pair<std::string, std::string>, std::uint64_t>;

  // Every internal node contributes its modifier, head, and the pair; a base
  // word contributes itself as a head.
  void add(const corpus::AnnotatedWord& word);
  void add_pair(const std::string& modifier, const std::string& head, std::uint64_t count = 1);
  void add_head(const std::string& head, std::uint64_t count = 1);
  void add_modifier(const std::string& modifier, std::uint64_t count = 1);

  std::uint64_t modifier_count(std::string_view part) const;
  std::uint64_t head_count(std::string_view part) const;
  std::uint64_t pair_count(std::string_view modifier, std::string_view head) const;
  bool is_known(std::string_view part) const;

  std::uint64_t modifier_total() const { return modifier_total_; }
  std::uint64_t head_total() const { return head_total_; }
  std::uint64_t pair_total() const { return pair_total_; }

  const CountMap& modifiers() const { return modifiers_; }
  const CountMap& heads() const { return heads_; }
  const PairMap& pairs() const { return pairs_; }
  bool empty() const { return modifiers_.empty() && heads_.empty() && pairs_.empty(); }

  friend bool operator==(const PartLexicon&, const PartLexicon&) = default;

 private:
  void add_node(const ConstituentTree& node);

  CountMap modifiers_;
  CountMap heads_;
  PairMap pairs_;
  std::uint64_t modifier_total_ = 0;
  std::uint64_t head_total_ = 0;
  std::uint64_t pair_total_ = 0;
};

PartLexicon build_lexicon(std::span<const corpus::AnnotatedWord> words);

// Seen pair: pair_count / pair_total. Unseen pair with both parts known in
// their roles: P(modifier) * P(head). Otherwise 0.
double pair_probability(std::string_view modifier, std::string_view head, const PartLexicon& lex);

// Score of an unsplit analysis: head_count / head_total (0 if unknown).
double base_score(std::string_view form, const PartLexicon& lex);

// Tree score: pair_probability(left, right) * score(left) * score(right)
// at each internal node, evaluated in that order; a leaf scores 1.
double tree_score(const ConstituentTree& tree, const PartLexicon& lex);

struct ScoredTree {
  ConstituentTree tree;
  double score = 0.0;
};

// Likeliest segmentation of `form` into known parts. Ties prefer fewer
// leaves, then the lexicographically smallest bracketing. Returns nullopt
// when no segmentation scores above zero or when the unsplit form, as a
// known head, scores at least as high.
std::optional<ScoredTree> best_structure(std::string_view form, const PartLexicon& lex);

// Versioned text format with [modifiers], [heads] and [pairs] sections.
void write_lexicon(std::ostream& out, const PartLexicon& lex);
PartLexicon read_lexicon(std::istream& in, const std::string& source = "<input>");
void save_lexicon(const std::filesystem::path& path, const PartLexicon& lex);
PartLexicon load_lexicon(const std::filesystem::path& path);

inline constexpr std::string_view kLexiconHeader = "kvistur-lexicon\t1";

}  // namespace decompound::baseline
