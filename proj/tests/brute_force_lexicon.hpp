#pragma once

// Exhaustive reference for the statistical splitter: counts parts straight
// from toy trees and scores every binary tree over every segmentation.

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "decompound/corpus.hpp"
#include "decompound/text.hpp"

namespace brute {

struct Counts {
  std::map<std::string, std::uint64_t> mod, head;
  std::map<std::pair<std::string, std::string>, std::uint64_t> pair;
  std::uint64_t mod_total = 0, head_total = 0, pair_total = 0;

  void node(const decompound::ConstituentTree& t) {
    if (t.is_leaf()) return;
    const std::string l = t.left().surface(), r = t.right().surface();
    ++mod[l];
    ++head[r];
    ++pair[{l, r}];
    ++mod_total;
    ++head_total;
    ++pair_total;
    node(t.left());
    node(t.right());
  }

  void add(const decompound::corpus::AnnotatedWord& w) {
    if (w.is_compound()) {
      node(w.structure);
    } else {
      ++head[w.form];
      ++head_total;
    }
  }

  bool known(const std::string& s) const { return mod.count(s) || head.count(s); }

  std::set<std::string> parts() const {
    std::set<std::string> out;
    for (const auto& [k, v] : mod) out.insert(k);
    for (const auto& [k, v] : head) out.insert(k);
    return out;
  }

  double prob(const std::string& l, const std::string& r) const {
    if (auto it = pair.find({l, r}); it != pair.end()) {
      return static_cast<double>(it->second) / static_cast<double>(pair_total);
    }
    auto m = mod.find(l);
    auto h = head.find(r);
    if (m == mod.end() || h == head.end()) return 0.0;
    return (static_cast<double>(m->second) / static_cast<double>(mod_total)) *
           (static_cast<double>(h->second) / static_cast<double>(head_total));
  }
};

struct Candidate {
  std::string bracketing;
  double score;
  std::size_t leaves;
};

// Every tree over chars[i, j) whose leaves are known parts; a bare leaf is
// allowed only when `allow_leaf`.
inline std::vector<Candidate> all_trees(const Counts& c, const std::u32string& chars, std::size_t i,
                                        std::size_t j, bool allow_leaf) {
  std::vector<Candidate> out;
  const std::string s = decompound::to_utf8(chars.substr(i, j - i));
  if (allow_leaf && c.known(s)) out.push_back({s, 1.0, 1});
  for (std::size_t k = i + 1; k < j; ++k) {
    const auto ls = all_trees(c, chars, i, k, true);
    if (ls.empty()) continue;
    const auto rs = all_trees(c, chars, k, j, true);
    const std::string lsurf = decompound::to_utf8(chars.substr(i, k - i));
    const std::string rsurf = decompound::to_utf8(chars.substr(k, j - k));
    for (const auto& l : ls) {
      for (const auto& r : rs) {
        out.push_back({"(" + l.bracketing + " " + r.bracketing + ")", c.prob(lsurf, rsurf) * l.score * r.score,
                       l.leaves + r.leaves});
      }
    }
  }
  return out;
}

// Highest-scoring split analysis; ties go to fewer leaves, then the smaller
// bracketing string. None when nothing scores above zero or the unsplit
// word scores at least as much.
inline std::optional<Candidate> best(const Counts& c, const std::string& form) {
  const auto chars = decompound::to_u32(form);
  std::optional<Candidate> top;
  for (const auto& t : all_trees(c, chars, 0, chars.size(), false)) {
    if (!(t.score > 0.0)) continue;
    if (!top || t.score > top->score ||
        (t.score == top->score &&
         (t.leaves < top->leaves || (t.leaves == top->leaves && t.bracketing < top->bracketing)))) {
      top = t;
    }
  }
  if (!top) return std::nullopt;
  const auto h = c.head.find(form);
  const double base =
      h == c.head.end() ? 0.0 : static_cast<double>(h->second) / static_cast<double>(c.head_total);
  if (top->score <= base) return std::nullopt;
  return top;
}

inline std::vector<std::string> toy_corpus_lines() {
  return {
      "fótbolti\tT1\t(fót bolti)",       "glerskór\tT2\t(gler skór)",
      "raforkuþörf\tT3\t((raf orku) þörf)", "ljósabba\tT4\t(ljós (ab ba))",
      "abba\tT5\t(ab ba)",               "ababa\tT6\t(aba ba)",
      "baab\tT7\t(ba ab)",               "húsvél\tT8\t(hús vél)",
      "vélhús\tT9\t(vél hús)",           "bílhúsvél\tT10\t(bíl (hús vél))",
      "ljóós\tT11\t(ljó ós)",            "fótós\tT12\t(fót ós)",
      "fót\tT13\tfót",                   "hús\tT14\thús",
      "vél\tT15\tvél",                   "ljós\tT16\tljós",
      "abba\tT17\tabba",                 "abab\tT18\tabab",
  };
}

inline std::vector<decompound::corpus::AnnotatedWord> toy_corpus() {
  std::vector<decompound::corpus::AnnotatedWord> out;
  for (const auto& line : toy_corpus_lines()) out.push_back(decompound::corpus::parse_tree_line(line));
  return out;
}

// Every concatenation of known parts up to max_chars code points.
inline std::vector<std::string> composable_forms(const Counts& c, std::size_t max_chars) {
  const auto parts = c.parts();
  std::set<std::string> seen;
  std::vector<std::pair<std::string, std::size_t>> frontier{{"", 0}};
  while (!frontier.empty()) {
    auto [s, n] = frontier.back();
    frontier.pop_back();
    for (const auto& p : parts) {
      const std::size_t m = n + decompound::char_length(p);
      if (m > max_chars) continue;
      std::string next = s + p;
      if (seen.insert(next).second) frontier.push_back({std::move(next), m});
    }
  }
  return {seen.begin(), seen.end()};
}

}  // namespace brute
