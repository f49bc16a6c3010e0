#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "decompound/corpus.hpp"
#include "decompound/synth.hpp"
#include "decompound/text.hpp"

using namespace decompound;
using namespace decompound::corpus;

TEST(Normalize, LowercasesAscii) { EXPECT_EQ(normalize("Reykjavík"), "reykjavík"); }

TEST(Normalize, LowercasesIcelandicLetters) { EXPECT_EQ(normalize("ÞÖRF"), "þörf"); }

TEST(Normalize, IdentityOnLowercase) { EXPECT_EQ(normalize("þörf"), "þörf"); }

TEST(Normalize, ComposesDecomposedInput) {
  // o + combining diaeresis
  EXPECT_EQ(normalize("tho\xCC\x88rf"), "thörf");
  EXPECT_EQ(char_length(normalize("tho\xCC\x88rf")), 5u);
}

TEST(Normalize, RejectsEmpty) { EXPECT_THROW(normalize(""), std::invalid_argument); }

TEST(Text, RejectsMalformedUtf8) { EXPECT_THROW(to_u32("a\xFF"), std::invalid_argument); }

TEST(ParseTreeLine, FourPartCompound) {
  const auto w = parse_tree_line("heildarraforkuþörf\tL1\t(heildar ((raf orku) þörf))");
  EXPECT_EQ(w.form, "heildarraforkuþörf");
  EXPECT_EQ(w.lemma_group, "L1");
  EXPECT_TRUE(w.is_compound());
  EXPECT_EQ(w.structure.leaves(), (std::vector<std::string>{"heildar", "raf", "orku", "þörf"}));
  EXPECT_EQ(w.structure.depth(), 3u);
  EXPECT_EQ(w.structure.left().surface(), "heildar");
  EXPECT_EQ(w.structure.right().left().surface(), "raforku");
}

TEST(ParseTreeLine, BaseWord) {
  const auto w = parse_tree_line("þörf\tL2\tþörf");
  EXPECT_FALSE(w.is_compound());
  EXPECT_EQ(w.structure, ConstituentTree::leaf("þörf"));
}

TEST(ParseTreeLine, TwoPartCompound) {
  const auto w = parse_tree_line("fótbolti\tL3\t(fót bolti)");
  EXPECT_EQ(w.structure, ConstituentTree::node(ConstituentTree::leaf("fót"), ConstituentTree::leaf("bolti")));
}

TEST(ParseTreeLine, LowercasesFormAndLeaves) {
  const auto w = parse_tree_line("Fótbolti\tL3\t(Fót bolti)");
  EXPECT_EQ(w.form, "fótbolti");
  EXPECT_EQ(w.structure.left().surface(), "fót");
}

TEST(ParseTreeLine, Errors) {
  EXPECT_THROW(parse_tree_line("abc\tL4\t(ab cd)"), ParseError);
  EXPECT_THROW(parse_tree_line("abc\tL4\t(ab c"), ParseError);
  EXPECT_THROW(parse_tree_line("abc\tL4\t(ab c))"), ParseError);
  EXPECT_THROW(parse_tree_line("abc\tL4\t(a b c)"), ParseError);
  EXPECT_THROW(parse_tree_line("abc\tL4\t( abc)"), ParseError);
  EXPECT_THROW(parse_tree_line("abc\tL4"), ParseError);
  EXPECT_THROW(parse_tree_line("abc\tL4\tabc\textra"), ParseError);
}

TEST(ParseTreeLine, ErrorCarriesLineNumber) {
  std::istringstream in("# header\nfótbolti\tL3\t(fót bolti)\n\nabc\tL4\t(ab cd)\n");
  try {
    read_corpus(in, Format::tree, "toy.tsv");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 4u);
    EXPECT_EQ(e.source(), "toy.tsv");
    EXPECT_NE(std::string(e.what()).find("toy.tsv:4:"), std::string::npos);
  }
}

TEST(ParseFlatLine, Split) {
  const auto w = parse_flat_line("raforkuþörf\tL5\t7");
  EXPECT_EQ(w.structure, ConstituentTree::node(ConstituentTree::leaf("raforku"), ConstituentTree::leaf("þörf")));
}

TEST(ParseFlatLine, ZeroMeansBase) {
  const auto w = parse_flat_line("haus\tL6\t0");
  EXPECT_FALSE(w.is_compound());
}

TEST(ParseFlatLine, Errors) {
  EXPECT_THROW(parse_flat_line("ab\tL7\t5"), ParseError);
  EXPECT_THROW(parse_flat_line("ab\tL7\t2"), ParseError);
  EXPECT_THROW(parse_flat_line("ab\tL7\t-1"), ParseError);
  EXPECT_THROW(parse_flat_line("ab\tL7\tx"), ParseError);
  EXPECT_THROW(parse_flat_line("ab\tL7\t1.5"), ParseError);
}

TEST(TopLevelSplit, Examples) {
  EXPECT_EQ(top_level_split(parse_tree_line("raforkuþörf\tL\t((raf orku) þörf)")).split_index, 7u);
  EXPECT_EQ(top_level_split(parse_tree_line("heildarraforkuþörf\tL\t(heildar ((raf orku) þörf))")).split_index,
            7u);
  const auto base = top_level_split(parse_tree_line("þörf\tL\tþörf"));
  EXPECT_FALSE(base.split_index.has_value());
  EXPECT_EQ(base.bits(), (std::vector<int>{0, 0, 0, 0}));
}

TEST(TopLevelSplit, BitsHaveSingleOne) {
  const auto v = top_level_split(parse_tree_line("raforkuþörf\tL\t((raf orku) þörf)"));
  const auto bits = v.bits();
  ASSERT_EQ(bits.size(), 11u);
  EXPECT_EQ(std::count(bits.begin(), bits.end(), 1), 1);
  EXPECT_EQ(bits[7], 1);
}

TEST(Deduplicate, KeepsFirstAndReportsConflict) {
  std::vector<AnnotatedWord> words{parse_tree_line("heimsenda\tA\t(heim senda)"),
                                   parse_tree_line("heimsenda\tB\t(heims enda)")};
  const auto r = deduplicate(words);
  ASSERT_EQ(r.words.size(), 1u);
  EXPECT_EQ(r.words[0].structure.left().surface(), "heim");
  ASSERT_EQ(r.conflicts.size(), 1u);
  EXPECT_EQ(r.conflicts[0].form, "heimsenda");
  EXPECT_EQ(r.conflicts[0].kept, "(heim senda)");
  EXPECT_EQ(r.conflicts[0].dropped, "(heims enda)");
}

TEST(Deduplicate, IdenticalDuplicatesAreSilent) {
  std::vector<AnnotatedWord> words{parse_tree_line("fótbolti\tL\t(fót bolti)"),
                                   parse_tree_line("fótbolti\tL\t(fót bolti)")};
  const auto r = deduplicate(words);
  EXPECT_EQ(r.words.size(), 1u);
  EXPECT_TRUE(r.conflicts.empty());
}

TEST(Deduplicate, Empty) {
  const auto r = deduplicate({});
  EXPECT_TRUE(r.words.empty());
  EXPECT_TRUE(r.conflicts.empty());
}

TEST(RoundTrip, TreeAndFlatLinesSurviveSerialization) {
  for (const auto& w : synth::generate({.words = 400, .seed = 5}).words) {
    EXPECT_EQ(parse_tree_line(format_line(w, Format::tree)).structure, w.structure);
    const auto flat = parse_flat_line(format_line(w, Format::flat));
    EXPECT_EQ(top_level_split(flat), top_level_split(w));
  }
  const std::string line = "heildarraforkuþörf\tL1\t(heildar ((raf orku) þörf))";
  EXPECT_EQ(format_line(parse_tree_line(line), Format::tree), line);
}

TEST(RoundTrip, WriteThenReadCorpus) {
  const auto words = synth::generate({.words = 200, .seed = 9}).words;
  std::stringstream s;
  write_corpus(s, words, Format::tree);
  const auto back = read_corpus(s, Format::tree);
  ASSERT_EQ(back.size(), words.size());
  for (std::size_t i = 0; i < words.size(); ++i) {
    EXPECT_EQ(back[i].form, words[i].form);
    EXPECT_EQ(back[i].lemma_group, words[i].lemma_group);
    EXPECT_EQ(back[i].structure, words[i].structure);
  }
}

TEST(Property, LeavesConcatenateToForm) {
  for (const auto& w : synth::generate({.words = 500, .seed = 2}).words) {
    std::string joined;
    for (const auto& leaf : w.structure.leaves()) joined += leaf;
    EXPECT_EQ(joined, w.form);
    const auto split = top_level_split(w);
    if (split.split_index) {
      EXPECT_GT(*split.split_index, 0u);
      EXPECT_LT(*split.split_index, w.length());
    }
  }
}

namespace {

double base_fraction(const std::vector<AnnotatedWord>& words) {
  const auto base = std::count_if(words.begin(), words.end(), [](const auto& w) { return !w.is_compound(); });
  return static_cast<double>(base) / static_cast<double>(words.size());
}

void expect_partition_invariants(std::span<const AnnotatedWord> all, const DatasetPartition& p) {
  std::map<std::string, int> form_set;
  std::map<std::string, int> group_set;
  int set_id = 0;
  for (const auto* set : {&p.train, &p.validation, &p.test}) {
    for (const auto& w : *set) {
      EXPECT_TRUE(form_set.emplace(w.form, set_id).second) << "form in two sets: " << w.form;
      const auto [it, fresh] = group_set.emplace(w.lemma_group, set_id);
      EXPECT_EQ(it->second, set_id) << "group split: " << w.lemma_group;
    }
    ++set_id;
  }
  EXPECT_EQ(form_set.size(), all.size());
  for (const auto& w : all) EXPECT_TRUE(form_set.count(w.form));

  const double n = static_cast<double>(all.size());
  std::vector<AnnotatedWord> everything(all.begin(), all.end());
  const double corpus_base = base_fraction(everything);
  EXPECT_NEAR(p.train.size() / n, 0.8, 0.005);
  EXPECT_NEAR(p.validation.size() / n, 0.1, 0.005);
  EXPECT_NEAR(p.test.size() / n, 0.1, 0.005);
  for (const auto* set : {&p.train, &p.validation, &p.test}) {
    EXPECT_NEAR(base_fraction(*set), corpus_base, 0.005);
  }
}

}  // namespace

TEST(Partition, InvariantsOnSyntheticCorpus) {
  const auto words = synth::generate({.words = 3000, .seed = 3}).words;
  expect_partition_invariants(words, partition(words, 11));
}

TEST(Partition, InvariantsOnHeadGroupedCorpus) {
  const auto words = synth::generate({.words = 3000, .seed = 4, .grouping = synth::Grouping::head}).words;
  expect_partition_invariants(words, partition(words, 5));
}

TEST(Partition, DeterministicPerSeed) {
  const auto words = synth::generate({.words = 1500, .seed = 6}).words;
  const auto a = partition(words, 42);
  const auto b = partition(words, 42);
  auto forms = [](const std::vector<AnnotatedWord>& s) {
    std::vector<std::string> f;
    for (const auto& w : s) f.push_back(w.form);
    return f;
  };
  EXPECT_EQ(forms(a.train), forms(b.train));
  EXPECT_EQ(forms(a.validation), forms(b.validation));
  EXPECT_EQ(forms(a.test), forms(b.test));
  const auto c = partition(words, 43);
  EXPECT_NE(forms(a.test), forms(c.test));
}

TEST(Partition, InflectedFormsStayTogether) {
  auto words = synth::generate({.words = 1500, .seed = 7}).words;
  for (const char* f : {"hestur", "hests", "hesti"}) {
    words.push_back(parse_tree_line(std::string(f) + "\tHESTUR\t" + f));
  }
  const auto p = partition(words, 1);
  int sets_with_hest = 0;
  for (const auto* set : {&p.train, &p.validation, &p.test}) {
    const auto n = std::count_if(set->begin(), set->end(), [](const auto& w) { return w.lemma_group == "HESTUR"; });
    if (n > 0) {
      EXPECT_EQ(n, 3);
      ++sets_with_hest;
    }
  }
  EXPECT_EQ(sets_with_hest, 1);
}

TEST(Partition, TooSmallCorpusIsReported) {
  std::vector<AnnotatedWord> words;
  for (const char* line : {"a\tG1\ta", "b\tG2\tb", "ab\tG3\t(a b)", "ba\tG4\t(b a)", "aa\tG5\t(a a)"}) {
    words.push_back(parse_tree_line(line));
  }
  EXPECT_THROW(partition(words, 1), StratificationError);
}

TEST(FrequencySubset, OrderedByFrequency) {
  std::vector<AnnotatedWord> train{parse_tree_line("a\tG\ta"), parse_tree_line("b\tG\tb"),
                                   parse_tree_line("c\tG\tc")};
  const FrequencyTable freqs{{"a", 5}, {"b", 3}, {"c", 9}};
  const auto s = frequency_subset(train, freqs, 2);
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(s[0].form, "c");
  EXPECT_EQ(s[1].form, "a");
  EXPECT_EQ(frequency_subset(train, freqs, 3).size(), 3u);
  EXPECT_THROW(frequency_subset(train, freqs, 4), std::invalid_argument);
}

TEST(FrequencySubset, MissingFormsCountAsZeroAndTiesByForm) {
  std::vector<AnnotatedWord> train{parse_tree_line("d\tG\td"), parse_tree_line("b\tG\tb"),
                                   parse_tree_line("c\tG\tc")};
  const FrequencyTable freqs{{"c", 1}};
  const auto s = frequency_subset(train, freqs, 3);
  EXPECT_EQ(s[0].form, "c");
  EXPECT_EQ(s[1].form, "b");
  EXPECT_EQ(s[2].form, "d");
}

TEST(FrequencySubset, NestedWhenDoubling) {
  const auto corpus = synth::generate({.words = 2000, .seed = 8});
  for (std::size_t n = 125; n * 2 <= corpus.words.size(); n *= 2) {
    std::set<std::string> small, large;
    for (const auto& w : frequency_subset(corpus.words, corpus.frequencies, n)) small.insert(w.form);
    for (const auto& w : frequency_subset(corpus.words, corpus.frequencies, 2 * n)) large.insert(w.form);
    EXPECT_TRUE(std::includes(large.begin(), large.end(), small.begin(), small.end()));
  }
}

TEST(Frequencies, ReadNormalizesForms) {
  std::istringstream in("ÞÖRF\t12\n# comment\n\nhaus\t3\n");
  const auto f = read_frequencies(in);
  EXPECT_EQ(f.at("þörf"), 12u);
  EXPECT_EQ(f.at("haus"), 3u);
  std::istringstream bad("haus\tmany\n");
  EXPECT_THROW(read_frequencies(bad), ParseError);
}

TEST(Synth, DeterministicAndExactSize) {
  const auto a = synth::generate({.words = 700, .seed = 12});
  const auto b = synth::generate({.words = 700, .seed = 12});
  ASSERT_EQ(a.words.size(), 700u);
  std::stringstream sa, sb;
  write_corpus(sa, a.words, Format::tree);
  write_corpus(sb, b.words, Format::tree);
  EXPECT_EQ(sa.str(), sb.str());
  std::set<std::string> forms;
  for (const auto& w : a.words) forms.insert(w.form);
  EXPECT_EQ(forms.size(), a.words.size());
}
