#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "decompound/corpus.hpp"
#include "decompound/model.hpp"
#include "decompound/vocab.hpp"

namespace decompound::neural {

struct EncodedWord {
  std::vector<int> indices;          // max_len entries, PAD past the word
  std::vector<std::uint8_t> mask;    // 1 on real characters
  corpus::SplitVector target;

  std::size_t length() const { return target.length; }
};

// Throws std::length_error when the form is longer than max_len.
EncodedWord encode(const corpus::AnnotatedWord& word, const CharVocab& vocab,
                   const ModelConfig& config);
// Encodes an unannotated form; the target carries no split.
EncodedWord encode_form(std::string_view form, const CharVocab& vocab, std::size_t max_len);

struct CellState {
  Eigen::VectorXd h;
  Eigen::VectorXd c;
};

// One LSTM step:
//   i = s(Wi x + Ui h + bi), f = s(Wf x + Uf h + bf), g = tanh(Wg x + Ug h + bg),
//   o = s(Wo x + Uo h + bo), c' = f*c + i*g, h' = o*tanh(c').
CellState lstm_cell(const Eigen::VectorXd& x, const Eigen::VectorXd& h_prev,
                    const Eigen::VectorXd& c_prev, const DirectionWeights& weights);

struct DirectionCache {
  Eigen::MatrixXd gates;      // 4H x TB, activated
  Eigen::MatrixXd cell;       // H x TB, masked
  Eigen::MatrixXd tanh_cell;  // H x TB, tanh of the unmasked cell
};

struct LayerCache {
  Eigen::MatrixXd input;   // in x TB
  Eigen::MatrixXd output;  // 2H x TB, masked [forward; backward] hidden states
  std::array<DirectionCache, 2> directions;
};

// Activations from forward(), consumed by backward(). Columns are laid out
// as t * batch + b.
struct ForwardCache {
  std::size_t batch = 0;
  std::size_t steps = 0;
  std::vector<int> indices;        // steps * batch
  Eigen::RowVectorXd mask;         // steps * batch
  Eigen::RowVectorXd probability;  // steps * batch
  std::vector<LayerCache> layers;
  std::uint64_t fingerprint = 0;
};

struct ForwardResult {
  // Per word, one probability per real character.
  std::vector<std::vector<double>> probabilities;
  ForwardCache cache;
};

ForwardResult forward(const ModelParameters& params, std::span<const EncodedWord> batch);
// Same computation without stamping the cache for backward(); for inference.
ForwardResult forward_probabilities(const ModelParameters& params, std::span<const EncodedWord> batch);

// Probabilities only; skips keeping the cache around.
std::vector<double> position_probabilities(const ModelParameters& params, const EncodedWord& word);

inline constexpr double kProbabilityClamp = 1e-12;

// Mean binary cross-entropy over the given positions.
double binary_cross_entropy(std::span<const double> probabilities, std::span<const double> targets);

// Mean binary cross-entropy over every real position of the batch.
double loss(const std::vector<std::vector<double>>& probabilities,
            std::span<const EncodedWord> batch);

// Analytic gradient of loss_scale * loss with respect to every parameter.
// Throws std::invalid_argument when the cache does not belong to these
// parameters and this batch.
ModelParameters backward(const ModelParameters& params, const ForwardCache& cache,
                         std::span<const EncodedWord> batch, double loss_scale = 1.0);

std::uint64_t fingerprint(const ModelParameters& params);

}  // namespace decompound::neural
