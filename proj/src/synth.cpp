#include "decompound/synth.hpp"

#include <array>
#include <cmath>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_set>

#include "decompound/text.hpp"

namespace decompound::synth {

namespace {

constexpr std::array<std::string_view, 17> kConsonants{
    "b", "d", "f", "g", "h", "j", "k", "l", "m", "n", "p", "r", "s", "t", "v", "þ", "ð"};
constexpr std::array<std::string_view, 13> kVowels{
    "a", "e", "i", "o", "u", "y", "á", "é", "í", "ó", "ú", "ö", "æ"};
constexpr std::array<std::array<std::string_view, 3>, 4> kParadigms{{
    {"", "s", "i"},
    {"ur", "s", "i"},
    {"a", "u", "ur"},
    {"", "ar", "um"},
}};

struct Root {
  std::string stem;
  std::string modifier;  // stem, optionally with a linking `s`
  std::size_t paradigm = 0;
};

class Generator {
 public:
  explicit Generator(const SynthOptions& o) : options_(o), rng_(o.seed) {}

  SynthCorpus run() {
    if (options_.words == 0) return {};
    if (options_.compound_fraction < 0.0 || options_.compound_fraction > 1.0) {
      throw std::invalid_argument("compound_fraction must lie in [0, 1]");
    }
    const double base_forms = static_cast<double>(options_.words) * (1.0 - options_.compound_fraction);
    const auto n_roots = static_cast<std::size_t>(std::max(12.0, std::ceil(base_forms / 3.0) + 4.0));
    make_roots(n_roots);

    const auto target_base = static_cast<std::size_t>(std::llround(base_forms));
    std::size_t base_count = 0;
    for (std::size_t r = 0; r < roots_.size() && base_count < target_base; ++r) {
      base_count += emit_base(r, target_base - base_count);
    }
    std::size_t attempts = 0;
    while (corpus_.words.size() < options_.words) {
      if (++attempts > 100 * options_.words + 1000) {
        throw std::runtime_error("synthetic generator could not produce enough unique forms");
      }
      emit_compound(options_.words - corpus_.words.size());
    }
    return std::move(corpus_);
  }

 private:
  std::size_t pick(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }
  bool chance(double p) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng_) < p; }

  std::string syllable() {
    std::string s(kConsonants[pick(kConsonants.size())]);
    s += kVowels[pick(kVowels.size())];
    if (chance(0.5)) s += kConsonants[pick(kConsonants.size())];
    return s;
  }

  void make_roots(std::size_t n) {
    std::set<std::string> seen;
    while (roots_.size() < n) {
      std::string stem = syllable();
      if (chance(0.5)) stem += syllable();
      if (char_length(stem) < 3 || !seen.insert(stem).second) continue;
      Root r;
      r.stem = stem;
      r.modifier = chance(options_.linking_fraction) ? stem + "s" : stem;
      r.paradigm = pick(kParadigms.size());
      roots_.push_back(std::move(r));
    }
  }

  std::string group_for(std::size_t head_root) {
    if (options_.grouping == Grouping::head) return "H" + std::to_string(head_root);
    return "L" + std::to_string(next_lemma_);
  }

  bool add(std::string form, ConstituentTree tree, const std::string& group, std::uint64_t freq) {
    if (!forms_.insert(form).second) return false;
    corpus_.frequencies[form] = freq;
    corpus_.words.push_back({std::move(form), std::move(tree), group});
    return true;
  }

  // Zipf-like lemma frequency, shrinking for rarer inflections.
  std::uint64_t frequency(std::size_t slot) {
    const double lemma_weight = 1e6 / static_cast<double>(next_lemma_ + 1);
    const double noise = std::uniform_real_distribution<double>(0.5, 1.5)(rng_);
    return static_cast<std::uint64_t>(lemma_weight * noise / static_cast<double>(slot + 1)) + 1;
  }

  std::size_t emit_base(std::size_t r, std::size_t budget) {
    const Root& root = roots_[r];
    const std::string group = group_for(r);
    std::size_t n = 0;
    for (std::size_t s = 0; s < 3 && n < budget; ++s) {
      std::string form = root.stem + std::string(kParadigms[root.paradigm][s]);
      n += add(form, ConstituentTree::leaf(form), group, frequency(s));
    }
    ++next_lemma_;
    return n;
  }

  void emit_compound(std::size_t budget) {
    const std::size_t head = pick(roots_.size());
    const Root& h = roots_[head];
    const bool three = chance(options_.three_part_fraction);
    const bool right_branching = three && chance(0.5);
    std::size_t m1 = pick(roots_.size());
    std::size_t m2 = pick(roots_.size());
    while (m1 == head) m1 = pick(roots_.size());
    while (three && (m2 == head || m2 == m1)) m2 = pick(roots_.size());

    const std::string group = group_for(head);
    for (std::size_t s = 0; s < 3 && budget > 0; ++s) {
      const std::string head_form = h.stem + std::string(kParadigms[h.paradigm][s]);
      ConstituentTree tree = ConstituentTree::leaf("x");
      if (!three) {
        tree = ConstituentTree::node(ConstituentTree::leaf(roots_[m1].modifier),
                                     ConstituentTree::leaf(head_form));
      } else if (right_branching) {
        tree = ConstituentTree::node(
            ConstituentTree::leaf(roots_[m1].modifier),
            ConstituentTree::node(ConstituentTree::leaf(roots_[m2].modifier),
                                  ConstituentTree::leaf(head_form)));
      } else {
        tree = ConstituentTree::node(
            ConstituentTree::node(ConstituentTree::leaf(roots_[m1].modifier),
                                  ConstituentTree::leaf(roots_[m2].modifier)),
            ConstituentTree::leaf(head_form));
      }
      std::string form = tree.surface();
      if (add(std::move(form), std::move(tree), group, frequency(s))) --budget;
    }
    ++next_lemma_;
  }

  SynthOptions options_;
  std::mt19937_64 rng_;
  std::vector<Root> roots_;
  std::unordered_set<std::string> forms_;
  std::size_t next_lemma_ = 0;
  SynthCorpus corpus_;
};

}  // namespace

SynthCorpus generate(const SynthOptions& options) { return Generator(options).run(); }

}  // namespace decompound::synth
