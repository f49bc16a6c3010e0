#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "decompound/tree.hpp"

namespace decompound::corpus {

struct AnnotatedWord {
  std::string form;  // normalized: NFC, lowercase
  ConstituentTree structure;
  std::string lemma_group;

  bool is_compound() const { return !structure.is_leaf(); }
  // Length in Unicode scalar values.
  std::size_t length() const;
};

// Per-character 0/1 target with at most one 1, at the first character of
// the head.
struct SplitVector {
  std::size_t length = 0;
  std::optional<std::size_t> split_index;

  std::vector<int> bits() const;
  friend bool operator==(const SplitVector&, const SplitVector&) = default;
};

enum class Format { tree, flat };

Format parse_format(std::string_view name);
std::string_view format_name(Format format);

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& source, std::size_t line, const std::string& what);
  const std::string& source() const { return source_; }
  std::size_t line() const { return line_; }

 private:
  std::string source_;
  std::size_t line_;
};

class StratificationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// `form<TAB>lemma_group<TAB>structure`
AnnotatedWord parse_tree_line(std::string_view line, std::size_t line_no = 0,
                              const std::string& source = "<input>");
// `form<TAB>lemma_group<TAB>split_index`, index 0 meaning no split.
AnnotatedWord parse_flat_line(std::string_view line, std::size_t line_no = 0,
                              const std::string& source = "<input>");

// Blank lines and `#` comments are skipped. Line numbers in errors are
// 1-based physical line numbers.
std::vector<AnnotatedWord> read_corpus(std::istream& in, Format format,
                                       const std::string& source = "<input>");
std::vector<AnnotatedWord> read_corpus_file(const std::filesystem::path& path, Format format);

std::string format_line(const AnnotatedWord& word, Format format);
void write_corpus(std::ostream& out, std::span<const AnnotatedWord> words, Format format);

SplitVector top_level_split(const AnnotatedWord& word);

struct Conflict {
  std::string form;
  std::string kept;     // bracketed structure retained
  std::string dropped;  // bracketed structure discarded
};

struct DedupResult {
  std::vector<AnnotatedWord> words;
  std::vector<Conflict> conflicts;
};

// First analysis of each form wins; later differing analyses are reported.
DedupResult deduplicate(std::vector<AnnotatedWord> words);

inline constexpr double kTrainRatio = 0.80;
inline constexpr double kValidationRatio = 0.10;
inline constexpr double kTestRatio = 0.10;
// Maximum deviation of a set's base-word fraction from the corpus-wide one.
inline constexpr double kStratificationTolerance = 0.005;
inline constexpr std::size_t kMinGroupsPerClass = 10;

struct DatasetPartition {
  std::vector<AnnotatedWord> train;
  std::vector<AnnotatedWord> validation;
  std::vector<AnnotatedWord> test;
};

// Assigns whole lemma groups to train/validation/test at 80/10/10 while
// keeping the base/compound mix of every set close to the corpus mix.
// Deterministic for a fixed seed; members keep input order within a set.
DatasetPartition partition(std::span<const AnnotatedWord> words, std::uint64_t seed);

using FrequencyTable = std::map<std::string, std::uint64_t, std::less<>>;

// `form<TAB>count` lines; forms are normalized on read.
FrequencyTable read_frequencies(std::istream& in, const std::string& source = "<input>");
FrequencyTable read_frequency_file(const std::filesystem::path& path);

// The n most frequent forms of `train`, ties broken by form. Forms missing
// from `freqs` count as zero.
std::vector<AnnotatedWord> frequency_subset(std::span<const AnnotatedWord> train,
                                            const FrequencyTable& freqs, std::size_t n);

}  // namespace decompound::corpus
