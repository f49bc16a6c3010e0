#include "decompound/corpus.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <fstream>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <random>
#include <unordered_map>

#include "decompound/text.hpp"

namespace decompound::corpus {

std::size_t AnnotatedWord::length() const { return char_length(form); }

std::vector<int> SplitVector::bits() const {
  std::vector<int> out(length, 0);
  if (split_index) out.at(*split_index) = 1;
  return out;
}

Format parse_format(std::string_view name) {
  if (name == "tree") return Format::tree;
  if (name == "flat") return Format::flat;
  throw std::invalid_argument("unknown corpus format '" + std::string(name) +
                              "' (expected tree or flat)");
}

std::string_view format_name(Format format) {
  return format == Format::tree ? "tree" : "flat";
}

ParseError::ParseError(const std::string& source, std::size_t line, const std::string& what)
    : std::runtime_error(source + ":" + std::to_string(line) + ": " + what),
      source_(source),
      line_(line) {}

namespace {

std::string_view strip_eol(std::string_view line) {
  while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) line.remove_suffix(1);
  return line;
}

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t tab = line.find('\t', start);
    fields.push_back(line.substr(start, tab - start));
    if (tab == std::string_view::npos) break;
    start = tab + 1;
  }
  return fields;
}

ConstituentTree normalize_tree(const ConstituentTree& t) {
  if (t.is_leaf()) return ConstituentTree::leaf(normalize(t.surface()));
  return ConstituentTree::node(normalize_tree(t.left()), normalize_tree(t.right()));
}

struct Fields {
  std::string form;
  std::string lemma;
  std::string_view third;
};

Fields split_record(std::string_view line, std::size_t line_no, const std::string& source) {
  const auto fields = split_tabs(strip_eol(line));
  if (fields.size() != 3) {
    throw ParseError(source, line_no,
                     "expected 3 tab-separated fields, found " + std::to_string(fields.size()));
  }
  if (fields[0].empty()) throw ParseError(source, line_no, "empty form");
  if (fields[1].empty()) throw ParseError(source, line_no, "empty lemma group");
  Fields out;
  try {
    out.form = normalize(fields[0]);
  } catch (const std::exception& e) {
    throw ParseError(source, line_no, e.what());
  }
  out.lemma = std::string(fields[1]);
  out.third = fields[2];
  return out;
}

}  // namespace

AnnotatedWord parse_tree_line(std::string_view line, std::size_t line_no,
                              const std::string& source) {
  Fields f = split_record(line, line_no, source);
  ConstituentTree structure = ConstituentTree::leaf("?");
  try {
    structure = normalize_tree(ConstituentTree::parse(f.third));
  } catch (const std::exception& e) {
    throw ParseError(source, line_no, e.what());
  }
  if (structure.surface() != f.form) {
    throw ParseError(source, line_no,
                     "leaf concatenation '" + structure.surface() + "' does not match form '" +
                         f.form + "'");
  }
  return AnnotatedWord{std::move(f.form), std::move(structure), std::move(f.lemma)};
}

AnnotatedWord parse_flat_line(std::string_view line, std::size_t line_no,
                              const std::string& source) {
  Fields f = split_record(line, line_no, source);
  long long index = 0;
  const char* begin = f.third.data();
  const char* end = begin + f.third.size();
  const auto [ptr, ec] = std::from_chars(begin, end, index);
  if (ec != std::errc() || ptr != end || f.third.empty()) {
    throw ParseError(source, line_no, "split index '" + std::string(f.third) + "' is not an integer");
  }
  const std::u32string wide = to_u32(f.form);
  if (index < 0 || static_cast<std::size_t>(index) >= wide.size()) {
    throw ParseError(source, line_no,
                     "split index " + std::to_string(index) + " out of range 0.." +
                         std::to_string(wide.size() - 1) + " for '" + f.form + "'");
  }
  ConstituentTree structure =
      index == 0 ? ConstituentTree::leaf(f.form)
                 : ConstituentTree::node(
                       ConstituentTree::leaf(to_utf8(std::u32string_view(wide).substr(0, index))),
                       ConstituentTree::leaf(to_utf8(std::u32string_view(wide).substr(index))));
  return AnnotatedWord{std::move(f.form), std::move(structure), std::move(f.lemma)};
}

std::vector<AnnotatedWord> read_corpus(std::istream& in, Format format,
                                       const std::string& source) {
  std::vector<AnnotatedWord> words;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view view = strip_eol(line);
    if (view.empty() || view.front() == '#') continue;
    words.push_back(format == Format::tree ? parse_tree_line(view, line_no, source)
                                           : parse_flat_line(view, line_no, source));
  }
  return words;
}

std::vector<AnnotatedWord> read_corpus_file(const std::filesystem::path& path, Format format) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open corpus file " + path.string());
  return read_corpus(in, format, path.string());
}

std::string format_line(const AnnotatedWord& word, Format format) {
  std::string out = word.form + '\t' + word.lemma_group + '\t';
  if (format == Format::tree) {
    out += word.structure.to_string();
  } else {
    out += std::to_string(top_level_split(word).split_index.value_or(0));
  }
  return out;
}

void write_corpus(std::ostream& out, std::span<const AnnotatedWord> words, Format format) {
  for (const auto& w : words) out << format_line(w, format) << '\n';
}

SplitVector top_level_split(const AnnotatedWord& word) {
  SplitVector v;
  v.length = word.length();
  if (word.is_compound()) v.split_index = char_length(word.structure.left().surface());
  return v;
}

DedupResult deduplicate(std::vector<AnnotatedWord> words) {
  DedupResult result;
  std::unordered_map<std::string, std::size_t> seen;
  for (auto& w : words) {
    const auto it = seen.find(w.form);
    if (it == seen.end()) {
      seen.emplace(w.form, result.words.size());
      result.words.push_back(std::move(w));
      continue;
    }
    const AnnotatedWord& kept = result.words[it->second];
    if (!(kept.structure == w.structure)) {
      result.conflicts.push_back({w.form, kept.structure.to_string(), w.structure.to_string()});
    }
  }
  return result;
}

namespace {

enum Cls { kBase = 0, kCompound = 1 };

struct Group {
  std::vector<std::size_t> members;
  std::array<std::size_t, 2> count{0, 0};
};

using Counts = std::array<std::array<double, 2>, 3>;

// Steepest-descent repair after the greedy pass: repeatedly applies the
// single move or pairwise swap of groups that lowers the cost most. Groups
// with equal class counts are interchangeable, so candidates are enumerated
// per distinct count vector, always taking the lowest group index.
template <typename Shift>
void refine(const std::vector<Group>& groups, std::vector<std::uint8_t>& assigned, Counts& current,
            const Shift& shift) {
  using Key = std::array<std::size_t, 2>;
  constexpr std::size_t kMaxSteps = 100000;
  constexpr double kMinGain = 1e-9;
  for (std::size_t step = 0; step < kMaxSteps; ++step) {
    std::array<std::map<Key, std::size_t>, 3> first;
    for (std::size_t gi = groups.size(); gi-- > 0;) first[assigned[gi]][groups[gi].count] = gi;

    double best_gain = kMinGain;
    bool found = false;
    std::size_t a = 0, b = 0;
    std::uint8_t a_to = 0, b_to = 0;
    bool swap = false;
    for (std::uint8_t s = 0; s < 3; ++s) {
      for (const auto& [key, gi] : first[s]) {
        const double kb = static_cast<double>(key[kBase]);
        const double kc = static_cast<double>(key[kCompound]);
        for (std::uint8_t t = 0; t < 3; ++t) {
          if (t == s) continue;
          const double gain = -(shift(s, -kb, -kc) + shift(t, kb, kc));
          if (gain > best_gain) {
            best_gain = gain;
            found = true;
            swap = false;
            a = gi;
            a_to = t;
          }
          if (t < s) continue;
          for (const auto& [other, gj] : first[t]) {
            if (other == key) continue;
            const double db = kb - static_cast<double>(other[kBase]);
            const double dc = kc - static_cast<double>(other[kCompound]);
            const double swap_gain = -(shift(s, -db, -dc) + shift(t, db, dc));
            if (swap_gain > best_gain) {
              best_gain = swap_gain;
              found = true;
              swap = true;
              a = gi;
              a_to = t;
              b = gj;
              b_to = s;
            }
          }
        }
      }
    }
    if (!found) return;
    auto apply = [&](std::size_t gi, std::uint8_t to) {
      for (int cls : {kBase, kCompound}) {
        current[assigned[gi]][cls] -= static_cast<double>(groups[gi].count[cls]);
        current[to][cls] += static_cast<double>(groups[gi].count[cls]);
      }
      assigned[gi] = to;
    };
    apply(a, a_to);
    if (swap) apply(b, b_to);
  }
}

}  // namespace

DatasetPartition partition(std::span<const AnnotatedWord> words, std::uint64_t seed) {
  std::vector<Group> groups;
  std::unordered_map<std::string_view, std::size_t> group_of;
  std::array<std::size_t, 2> total{0, 0};
  for (std::size_t i = 0; i < words.size(); ++i) {
    const auto& w = words[i];
    if (w.lemma_group.empty()) {
      throw std::invalid_argument("word '" + w.form + "' has no lemma group");
    }
    auto [it, inserted] = group_of.try_emplace(w.lemma_group, groups.size());
    if (inserted) groups.emplace_back();
    Group& g = groups[it->second];
    g.members.push_back(i);
    const int cls = w.is_compound() ? kCompound : kBase;
    ++g.count[cls];
    ++total[cls];
  }

  for (int cls : {kBase, kCompound}) {
    if (total[cls] == 0) continue;
    const auto n = std::count_if(groups.begin(), groups.end(),
                                 [cls](const Group& g) { return g.count[cls] > 0; });
    if (static_cast<std::size_t>(n) < kMinGroupsPerClass) {
      throw StratificationError(
          "cannot stratify: only " + std::to_string(n) + " lemma groups contain " +
          (cls == kBase ? "base words" : "compounds") + ", need at least " +
          std::to_string(kMinGroupsPerClass));
    }
  }

  std::vector<std::size_t> order(groups.size());
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return groups[a].members.size() > groups[b].members.size();
  });

  constexpr std::array<double, 3> ratios{kTrainRatio, kValidationRatio, kTestRatio};
  std::array<std::array<double, 2>, 3> target{};
  for (std::size_t s = 0; s < 3; ++s) {
    for (int cls : {kBase, kCompound}) target[s][cls] = ratios[s] * static_cast<double>(total[cls]);
  }
  Counts current{};
  std::vector<std::uint8_t> assigned(groups.size(), 0);

  // Squared deviation from the per-class targets, scaled by set size so
  // that the small sets are held to the same relative precision.
  auto cost = [&](std::size_t s, double base, double compound) {
    const double db = base - target[s][kBase];
    const double dc = compound - target[s][kCompound];
    return (db * db + dc * dc) / ratios[s];
  };
  auto shift = [&](std::size_t s, double base, double compound) {
    return cost(s, current[s][kBase] + base, current[s][kCompound] + compound) -
           cost(s, current[s][kBase], current[s][kCompound]);
  };

  // Greedy: largest groups first, each where it raises the cost least.
  for (std::size_t gi : order) {
    const Group& g = groups[gi];
    std::size_t best = 0;
    double best_delta = 0.0;
    for (std::size_t s = 0; s < 3; ++s) {
      const double delta =
          shift(s, static_cast<double>(g.count[kBase]), static_cast<double>(g.count[kCompound]));
      if (s == 0 || delta < best_delta) {
        best = s;
        best_delta = delta;
      }
    }
    assigned[gi] = static_cast<std::uint8_t>(best);
    for (int cls : {kBase, kCompound}) current[best][cls] += static_cast<double>(g.count[cls]);
  }
  refine(groups, assigned, current, shift);
  std::vector<std::uint8_t> set_of(words.size(), 0);
  for (std::size_t gi = 0; gi < groups.size(); ++gi) {
    for (std::size_t m : groups[gi].members) set_of[m] = assigned[gi];
  }
  DatasetPartition out;
  std::array<std::vector<AnnotatedWord>*, 3> sets{&out.train, &out.validation, &out.test};
  for (std::size_t i = 0; i < words.size(); ++i) sets[set_of[i]]->push_back(words[i]);

  const double overall = static_cast<double>(total[kBase]) /
                         static_cast<double>(std::max<std::size_t>(1, words.size()));
  constexpr std::array<const char*, 3> names{"train", "validation", "test"};
  for (std::size_t s = 0; s < 3; ++s) {
    const double n = current[s][kBase] + current[s][kCompound];
    if (n == 0.0) {
      throw StratificationError(std::string("cannot stratify: ") + names[s] + " set is empty");
    }
    const double fraction = current[s][kBase] / n;
    if (std::abs(fraction - overall) > kStratificationTolerance) {
      throw StratificationError(std::string("cannot stratify: ") + names[s] +
                                " base-word fraction " + std::to_string(fraction) +
                                " deviates from corpus fraction " + std::to_string(overall) +
                                " by more than 0.5 percentage points");
    }
  }
  return out;
}

FrequencyTable read_frequencies(std::istream& in, const std::string& source) {
  FrequencyTable table;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view view = strip_eol(line);
    if (view.empty() || view.front() == '#') continue;
    const auto fields = split_tabs(view);
    if (fields.size() != 2) {
      throw ParseError(source, line_no, "expected form<TAB>count");
    }
    std::uint64_t count = 0;
    const char* end = fields[1].data() + fields[1].size();
    const auto [ptr, ec] = std::from_chars(fields[1].data(), end, count);
    if (ec != std::errc() || ptr != end || fields[1].empty()) {
      throw ParseError(source, line_no, "count '" + std::string(fields[1]) + "' is not an integer");
    }
    std::string form;
    try {
      form = normalize(fields[0]);
    } catch (const std::exception& e) {
      throw ParseError(source, line_no, e.what());
    }
    table[form] += count;
  }
  return table;
}

FrequencyTable read_frequency_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open frequency file " + path.string());
  return read_frequencies(in, path.string());
}

std::vector<AnnotatedWord> frequency_subset(std::span<const AnnotatedWord> train,
                                            const FrequencyTable& freqs, std::size_t n) {
  if (n > train.size()) {
    throw std::invalid_argument("requested " + std::to_string(n) + " words but training set has " +
                                std::to_string(train.size()));
  }
  std::vector<std::pair<std::uint64_t, std::size_t>> ranked;
  ranked.reserve(train.size());
  for (std::size_t i = 0; i < train.size(); ++i) {
    const auto it = freqs.find(train[i].form);
    ranked.emplace_back(it == freqs.end() ? 0 : it->second, i);
  }
  std::sort(ranked.begin(), ranked.end(), [&](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    if (train[a.second].form != train[b.second].form) {
      return train[a.second].form < train[b.second].form;
    }
    return a.second < b.second;
  });
  std::vector<AnnotatedWord> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(train[ranked[i].second]);
  return out;
}

}  // namespace decompound::corpus
