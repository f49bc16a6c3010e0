#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "decompound/lexicon.hpp"
#include "decompound/tree.hpp"
#include "decompound/trainer.hpp"

namespace decompound {

// Anything that can propose a single binary split of a lowercase word.
// A returned position p satisfies 1 <= p <= length - 1 (code points).
class BinarySplitter {
 public:
  virtual ~BinarySplitter() = default;
  virtual std::optional<std::size_t> split(std::string_view form) const = 0;
};

class SplitterContractError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

inline constexpr std::size_t kDefaultMaxDepth = 16;

// Applies `splitter` recursively until it declines, a part is a single
// character, or max_depth levels of splits have been made.
ConstituentTree derive_tree(const BinarySplitter& splitter, std::string_view form,
                            std::size_t max_depth = kDefaultMaxDepth);

class NeuralSplitter final : public BinarySplitter {
 public:
  explicit NeuralSplitter(const neural::TrainedModel& model) : model_(model) {}
  std::optional<std::size_t> split(std::string_view form) const override;

 private:
  const neural::TrainedModel& model_;
};

// Top-level split of the statistical baseline's likeliest structure.
class LexiconSplitter final : public BinarySplitter {
 public:
  explicit LexiconSplitter(const baseline::PartLexicon& lexicon) : lexicon_(lexicon) {}
  std::optional<std::size_t> split(std::string_view form) const override;

 private:
  const baseline::PartLexicon& lexicon_;
};

// Adapts a callable, mainly for oracles and tests.
class FunctionSplitter final : public BinarySplitter {
 public:
  using Fn = std::function<std::optional<std::size_t>(std::string_view)>;
  explicit FunctionSplitter(Fn fn) : fn_(std::move(fn)) {}
  std::optional<std::size_t> split(std::string_view form) const override { return fn_(form); }

 private:
  Fn fn_;
};

}  // namespace decompound
