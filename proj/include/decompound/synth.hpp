#pragma once

#include <cstdint>
#include <vector>

#include "decompound/corpus.hpp"

namespace decompound::synth {

enum class Grouping {
  lemma,  // one group per lemma (its inflected forms)
  head,   // one group per head root: every word ending in that root, plus the root itself
};

struct SynthOptions {
  std::size_t words = 1000;
  std::uint64_t seed = 1;
  double compound_fraction = 0.7;
  double three_part_fraction = 0.2;  // among compounds
  double linking_fraction = 0.3;     // modifiers taking a linking `s`
  Grouping grouping = Grouping::lemma;
};

struct SynthCorpus {
  std::vector<corpus::AnnotatedWord> words;
  corpus::FrequencyTable frequencies;
};

// Deterministic toy corpus: pseudo-Icelandic roots with small inflection
// paradigms, combined into two- and three-part compounds with gold trees.
// Forms are unique; exactly `options.words` entries are produced.
SynthCorpus generate(const SynthOptions& options);

}  // namespace decompound::synth
