#include <gtest/gtest.h>

#include <sstream>

#include "brute_force_lexicon.hpp"
#include "decompound/lexicon.hpp"

using namespace decompound;
using namespace decompound::baseline;
using corpus::parse_tree_line;

namespace {

PartLexicon lexicon_of(std::initializer_list<const char*> lines) {
  std::vector<corpus::AnnotatedWord> words;
  for (const char* l : lines) words.push_back(parse_tree_line(l));
  return build_lexicon(words);
}

}  // namespace

TEST(BuildLexicon, SingleCompound) {
  const auto lex = lexicon_of({"fótbolti\tL\t(fót bolti)"});
  EXPECT_EQ(lex.modifier_count("fót"), 1u);
  EXPECT_EQ(lex.head_count("bolti"), 1u);
  EXPECT_EQ(lex.pair_count("fót", "bolti"), 1u);
  EXPECT_EQ(lex.pair_total(), 1u);
}

TEST(BuildLexicon, FourPartTreeGivesThreePairs) {
  const auto lex = lexicon_of({"heildarraforkuþörf\tL\t(heildar ((raf orku) þörf))"});
  EXPECT_EQ(lex.pairs().size(), 3u);
  EXPECT_EQ(lex.pair_count("heildar", "raforkuþörf"), 1u);
  EXPECT_EQ(lex.pair_count("raforku", "þörf"), 1u);
  EXPECT_EQ(lex.pair_count("raf", "orku"), 1u);
}

TEST(BuildLexicon, BaseWordsAreHeads) {
  const auto lex = lexicon_of({"þörf\tL\tþörf"});
  EXPECT_EQ(lex.head_count("þörf"), 1u);
  EXPECT_TRUE(lex.modifiers().empty());
  EXPECT_TRUE(lex.pairs().empty());
}

TEST(BuildLexicon, EmptyCorpus) { EXPECT_TRUE(build_lexicon({}).empty()); }

TEST(BuildLexicon, TotalsEqualSums) {
  const auto lex = build_lexicon(brute::toy_corpus());
  std::uint64_t m = 0, h = 0, p = 0;
  for (const auto& [k, v] : lex.modifiers()) m += v;
  for (const auto& [k, v] : lex.heads()) h += v;
  for (const auto& [k, v] : lex.pairs()) {
    p += v;
    EXPECT_GT(lex.modifier_count(k.first), 0u);
    EXPECT_GT(lex.head_count(k.second), 0u);
  }
  EXPECT_EQ(m, lex.modifier_total());
  EXPECT_EQ(h, lex.head_total());
  EXPECT_EQ(p, lex.pair_total());
}

TEST(PairProbability, SeenPair) {
  const auto lex = lexicon_of({"fótbolti\tL\t(fót bolti)"});
  EXPECT_EQ(pair_probability("fót", "bolti", lex), 1.0);
}

TEST(PairProbability, BackOffToRoleProbabilities) {
  const auto lex = lexicon_of({"fótbolti\tL\t(fót bolti)", "glerskór\tL\t(gler skór)"});
  EXPECT_EQ(pair_probability("fót", "skór", lex), 0.25);
}

TEST(PairProbability, UnknownPartGivesZero) {
  const auto lex = lexicon_of({"fótbolti\tL\t(fót bolti)", "glerskór\tL\t(gler skór)"});
  EXPECT_EQ(pair_probability("fót", "hús", lex), 0.0);
  EXPECT_EQ(pair_probability("bolti", "skór", lex), 0.0);  // bolti is never a modifier
}

TEST(BestStructure, SplitsFootball) {
  const auto lex = lexicon_of({"fótbolti\tL\t(fót bolti)"});
  const auto r = best_structure("fótbolti", lex);
  ASSERT_TRUE(r);
  EXPECT_EQ(r->tree.to_string(), "(fót bolti)");
  EXPECT_EQ(r->score, 1.0);
}

TEST(BestStructure, UnknownMaterialIsLeftUnsplit) {
  const auto lex = lexicon_of({"fótbolti\tL\t(fót bolti)"});
  EXPECT_FALSE(best_structure("fótgler", lex));
  EXPECT_FALSE(best_structure("x", lex));
}

TEST(BestStructure, FrequentBaseWordWins) {
  const auto lex = lexicon_of({"ab\tL\t(a b)", "ab\tL\tab", "ab\tL\tab", "ab\tL\tab"});
  // pair 1/1 vs base 3/4
  EXPECT_TRUE(best_structure("ab", lex));
  const auto lex2 = lexicon_of({"ab\tL\t(a b)", "xy\tL\t(x y)", "ab\tL\tab", "ab\tL\tab", "ab\tL\tab"});
  // pair 1/2 vs base 3/5
  EXPECT_FALSE(best_structure("ab", lex2));
}

TEST(BestStructure, ShallowerTreeWinsOnProductScore) {
  // raforkuþörf is itself a known head, so the two-leaf analysis (1/3)
  // beats the full tree (1/27).
  const auto lex = lexicon_of({"heildarraforkuþörf\tL\t(heildar ((raf orku) þörf))"});
  const auto r = best_structure("heildarraforkuþörf", lex);
  ASSERT_TRUE(r);
  EXPECT_EQ(r->tree.to_string(), "(heildar raforkuþörf)");
  EXPECT_EQ(r->score, 1.0 / 3.0);
  const auto full = ConstituentTree::parse("(heildar ((raf orku) þörf))");
  EXPECT_EQ(tree_score(full, lex), 1.0 / 3.0 * (1.0 / 3.0 * (1.0 / 3.0)));
}

TEST(BestStructure, MatchesBruteForceOnToyLexicon) {
  const auto words = brute::toy_corpus();
  brute::Counts counts;
  for (const auto& w : words) counts.add(w);
  ASSERT_EQ(counts.parts().size(), 20u);
  const auto lex = build_lexicon(words);
  const auto forms = brute::composable_forms(counts, 12);
  ASSERT_GT(forms.size(), 1000u);
  std::size_t split = 0;
  for (const auto& form : forms) {
    const auto expected = brute::best(counts, form);
    const auto got = best_structure(form, lex);
    ASSERT_EQ(expected.has_value(), got.has_value()) << form;
    if (!got) continue;
    ++split;
    ASSERT_EQ(got->tree.to_string(), expected->bracketing) << form;
    ASSERT_EQ(got->score, expected->score) << form;
    ASSERT_EQ(got->score, tree_score(got->tree, lex)) << form;
    for (const auto& leaf : got->tree.leaves()) ASSERT_TRUE(lex.is_known(leaf)) << form;
  }
  EXPECT_GT(split, 100u);
}

TEST(BestStructure, ScoreFollowsFormulaAfterUnrelatedAdditions) {
  auto words = brute::toy_corpus();
  auto lex = build_lexicon(words);
  const auto before = best_structure("fótbolti", lex);
  ASSERT_TRUE(before);
  lex.add(parse_tree_line("kalt\tX\t(ka lt)"));
  const auto after = best_structure("fótbolti", lex);
  ASSERT_TRUE(after);
  EXPECT_EQ(after->score, static_cast<double>(lex.pair_count("fót", "bolti")) / lex.pair_total());
}

TEST(LexiconIo, RoundTrip) {
  const auto lex = build_lexicon(brute::toy_corpus());
  std::stringstream s;
  write_lexicon(s, lex);
  EXPECT_EQ(s.str().rfind("kvistur-lexicon\t1\n", 0), 0u);
  EXPECT_EQ(read_lexicon(s), lex);
}

TEST(LexiconIo, Errors) {
  auto read = [](const std::string& text) {
    std::istringstream in(text);
    return read_lexicon(in, "lex");
  };
  EXPECT_THROW(read(""), corpus::ParseError);
  EXPECT_THROW(read("kvistur-lexicon\t2\n"), corpus::ParseError);
  EXPECT_THROW(read("kvistur-lexicon\t1\nfót\t1\n"), corpus::ParseError);
  EXPECT_THROW(read("kvistur-lexicon\t1\n[heads]\nfót\t0\n"), corpus::ParseError);
  EXPECT_THROW(read("kvistur-lexicon\t1\n[heads]\nfót\tx\n"), corpus::ParseError);
  EXPECT_THROW(read("kvistur-lexicon\t1\n[modifiers]\nfót\t1\n[pairs]\nfót\tbolti\t1\n"), corpus::ParseError);
  EXPECT_NO_THROW(read("kvistur-lexicon\t1\n[modifiers]\nfót\t1\n[heads]\nbolti\t1\n[pairs]\nfót\tbolti\t1\n"));
}
