#include "decompound/network.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <stdexcept>

#include "decompound/text.hpp"

namespace decompound::neural {

using Eigen::Index;
using Eigen::MatrixXd;

EncodedWord encode_form(std::string_view form, const CharVocab& vocab, std::size_t max_len) {
  const std::u32string chars = to_u32(form);
  if (chars.empty()) throw std::invalid_argument("cannot encode an empty form");
  if (chars.size() > max_len) {
    throw std::length_error("'" + std::string(form) + "' has " + std::to_string(chars.size()) +
                            " characters, model accepts at most " + std::to_string(max_len));
  }
  EncodedWord e;
  e.indices.assign(max_len, CharVocab::kPad);
  e.mask.assign(max_len, 0);
  for (std::size_t i = 0; i < chars.size(); ++i) {
    e.indices[i] = vocab.index_of(chars[i]);
    e.mask[i] = 1;
  }
  e.target.length = chars.size();
  return e;
}

EncodedWord encode(const corpus::AnnotatedWord& word, const CharVocab& vocab,
                   const ModelConfig& config) {
  EncodedWord e = encode_form(word.form, vocab, config.max_len);
  e.target = corpus::top_level_split(word);
  return e;
}

namespace {

template <typename Derived>
auto sigmoid(const Eigen::ArrayBase<Derived>& x) {
  return 1.0 / (1.0 + (-x).exp());
}

// Applies gate nonlinearities to the pre-activations in place and returns
// the new (unmasked) cell state.
MatrixXd activate_gates(MatrixXd& z, const MatrixXd& c_prev, Index H) {
  z.topRows(2 * H) = sigmoid(z.topRows(2 * H).array()).matrix();
  z.middleRows(2 * H, H) = z.middleRows(2 * H, H).array().tanh().matrix();
  z.bottomRows(H) = sigmoid(z.bottomRows(H).array()).matrix();
  return (z.middleRows(H, H).array() * c_prev.array() +
          z.topRows(H).array() * z.middleRows(2 * H, H).array())
      .matrix();
}

void check_direction(const DirectionWeights& w) {
  const Index H = w.recurrent.cols();
  if (w.recurrent.rows() != 4 * H || w.input.rows() != 4 * H || w.bias.rows() != 4 * H ||
      w.bias.cols() != 1) {
    throw std::invalid_argument("LSTM weight shapes are inconsistent");
  }
}

}  // namespace

CellState lstm_cell(const Eigen::VectorXd& x, const Eigen::VectorXd& h_prev,
                    const Eigen::VectorXd& c_prev, const DirectionWeights& weights) {
  check_direction(weights);
  const Index H = weights.recurrent.cols();
  if (x.size() != weights.input.cols() || h_prev.size() != H || c_prev.size() != H) {
    throw std::invalid_argument("lstm_cell: input or state size does not match weights");
  }
  MatrixXd z = weights.input * x + weights.recurrent * h_prev + weights.bias;
  MatrixXd c = activate_gates(z, c_prev, H);
  CellState out;
  out.c = c.col(0);
  out.h = (z.bottomRows(H).array() * c.array().tanh()).matrix().col(0);
  return out;
}

std::uint64_t fingerprint(const ModelParameters& params) {
  std::uint64_t h = 1469598103934665603ull;  // FNV-1a
  params.for_each([&](const std::string&, const MatrixXd& m) {
    for (Index i = 0; i < m.size(); ++i) {
      std::uint64_t word;
      std::memcpy(&word, m.data() + i, sizeof word);
      h = (h ^ word) * 1099511628211ull;
    }
    h = (h ^ (static_cast<std::uint64_t>(m.rows()) * 31 + static_cast<std::uint64_t>(m.cols()))) *
        1099511628211ull;
  });
  return h;
}

namespace {

void run_direction(const DirectionWeights& w, const MatrixXd& x, const Eigen::RowVectorXd& mask,
                   std::size_t steps, std::size_t batch, Direction dir, DirectionCache& cache,
                   Eigen::Block<MatrixXd> hidden_out) {
  const Index H = w.recurrent.cols();
  const auto B = static_cast<Index>(batch);
  MatrixXd pre = w.input * x;
  pre.colwise() += w.bias.col(0);
  cache.gates.resize(4 * H, pre.cols());
  cache.cell.resize(H, pre.cols());
  cache.tanh_cell.resize(H, pre.cols());

  MatrixXd h = MatrixXd::Zero(H, B);
  MatrixXd c = MatrixXd::Zero(H, B);
  MatrixXd z(4 * H, B);
  for (std::size_t s = 0; s < steps; ++s) {
    const auto t = static_cast<Index>(dir == kForward ? s : steps - 1 - s);
    z = pre.middleCols(t * B, B);
    z.noalias() += w.recurrent * h;
    MatrixXd c_new = activate_gates(z, c, H);
    const auto m = mask.segment(t * B, B).array();
    MatrixXd tc = c_new.array().tanh().matrix();
    c = (c_new.array().rowwise() * m).matrix();
    h = (z.bottomRows(H).array() * tc.array()).rowwise() * m;
    cache.gates.middleCols(t * B, B) = z;
    cache.cell.middleCols(t * B, B) = c;
    cache.tanh_cell.middleCols(t * B, B) = tc;
    hidden_out.middleCols(t * B, B) = h;
  }
}

// Backpropagation through time for one direction. Accumulates parameter
// gradients into `grad` and returns the gradient with respect to the input.
MatrixXd backprop_direction(const DirectionWeights& w, DirectionWeights& grad, const MatrixXd& x,
                            const MatrixXd& hidden, const DirectionCache& cache,
                            const MatrixXd& d_hidden, const Eigen::RowVectorXd& mask,
                            std::size_t steps, std::size_t batch, Direction dir) {
  const Index H = w.recurrent.cols();
  const auto B = static_cast<Index>(batch);
  MatrixXd dz(4 * H, x.cols());
  MatrixXd dh_rec = MatrixXd::Zero(H, B);
  MatrixXd dc_rec = MatrixXd::Zero(H, B);
  for (std::size_t r = steps; r-- > 0;) {
    const auto t = static_cast<Index>(dir == kForward ? r : steps - 1 - r);
    const auto m = mask.segment(t * B, B).array();
    const auto gates = cache.gates.middleCols(t * B, B).array();
    const auto i = gates.topRows(H);
    const auto f = gates.middleRows(H, H);
    const auto g = gates.middleRows(2 * H, H);
    const auto o = gates.bottomRows(H);
    const auto tc = cache.tanh_cell.middleCols(t * B, B).array();

    const Eigen::ArrayXXd dh = (d_hidden.middleCols(t * B, B) + dh_rec).array().rowwise() * m;
    const Eigen::ArrayXXd dc = (dc_rec.array().rowwise() * m) + dh * o * (1.0 - tc.square());

    const bool has_prev = r > 0;
    const Index prev = dir == kForward ? t - 1 : t + 1;
    auto dzt = dz.middleCols(t * B, B);
    if (has_prev) {
      dzt.middleRows(H, H) = (dc * cache.cell.middleCols(prev * B, B).array() * f * (1.0 - f)).matrix();
    } else {
      dzt.middleRows(H, H).setZero();
    }
    dzt.topRows(H) = (dc * g * i * (1.0 - i)).matrix();
    dzt.middleRows(2 * H, H) = (dc * i * (1.0 - g.square())).matrix();
    dzt.bottomRows(H) = (dh * tc * o * (1.0 - o)).matrix();

    if (has_prev) {
      grad.recurrent.noalias() += dzt * hidden.middleCols(prev * B, B).transpose();
    }
    dh_rec.noalias() = w.recurrent.transpose() * dzt;
    dc_rec = (dc * f).matrix();
  }
  grad.input.noalias() += dz * x.transpose();
  grad.bias += dz.rowwise().sum();
  return w.input.transpose() * dz;
}

}  // namespace

ForwardResult forward(const ModelParameters& params, std::span<const EncodedWord> batch) {
  ForwardResult result = forward_probabilities(params, batch);
  result.cache.fingerprint = fingerprint(params);
  return result;
}

ForwardResult forward_probabilities(const ModelParameters& params, std::span<const EncodedWord> batch) {
  if (batch.empty()) throw std::invalid_argument("forward: empty batch");
  if (params.layers.empty()) throw std::invalid_argument("forward: model has no LSTM layers");
  ForwardResult result;
  ForwardCache& cache = result.cache;
  cache.batch = batch.size();
  for (const auto& w : batch) cache.steps = std::max(cache.steps, w.length());
  if (cache.steps == 0) throw std::invalid_argument("forward: batch contains only empty words");

  const auto B = static_cast<Index>(cache.batch);
  const auto T = static_cast<Index>(cache.steps);
  const Index vocab = params.embedding.rows();
  cache.indices.assign(static_cast<std::size_t>(T * B), CharVocab::kPad);
  cache.mask = Eigen::RowVectorXd::Zero(T * B);
  LayerCache first;
  first.input.resize(params.embedding.cols(), T * B);
  for (Index b = 0; b < B; ++b) {
    const EncodedWord& w = batch[static_cast<std::size_t>(b)];
    if (w.indices.size() < w.length() || w.mask.size() < w.length()) {
      throw std::invalid_argument("forward: encoded word is shorter than its length");
    }
    for (Index t = 0; t < T; ++t) {
      const auto ti = static_cast<std::size_t>(t);
      const int idx = ti < w.indices.size() ? w.indices[ti] : CharVocab::kPad;
      if (idx < 0 || idx >= vocab) {
        throw std::out_of_range("forward: vocabulary index " + std::to_string(idx) +
                                " outside embedding of " + std::to_string(vocab) + " rows");
      }
      const bool real = ti < w.length();
      if (real != (ti < w.mask.size() && w.mask[ti] != 0)) {
        throw std::invalid_argument("forward: mask is not a prefix of the word length");
      }
      cache.indices[static_cast<std::size_t>(t * B + b)] = idx;
      cache.mask(t * B + b) = real ? 1.0 : 0.0;
      first.input.col(t * B + b) = params.embedding.row(idx).transpose();
    }
  }

  cache.layers.reserve(params.layers.size());
  cache.layers.push_back(std::move(first));
  for (std::size_t l = 0; l < params.layers.size(); ++l) {
    if (l > 0) {
      LayerCache next;
      next.input = cache.layers.back().output;
      cache.layers.push_back(std::move(next));
    }
    LayerCache& layer = cache.layers.back();
    const Index H = params.layers[l][kForward].recurrent.cols();
    for (const auto& w : params.layers[l]) {
      check_direction(w);
      if (w.input.cols() != layer.input.rows() || w.recurrent.cols() != H) {
        throw std::invalid_argument("forward: layer input size does not match weights");
      }
    }
    layer.output.resize(2 * H, T * B);
    for (Direction d : {kForward, kBackward}) {
      run_direction(params.layers[l][d], layer.input, cache.mask, cache.steps, cache.batch, d,
                    layer.directions[d], layer.output.middleRows(d == kForward ? 0 : H, H));
    }
  }

  const MatrixXd& top = cache.layers.back().output;
  if (params.output_weights.rows() != 1 || params.output_weights.cols() != top.rows() ||
      params.output_bias.size() != 1) {
    throw std::invalid_argument("forward: output layer shape does not match hidden size");
  }
  Eigen::RowVectorXd logits = params.output_weights * top;
  logits.array() += params.output_bias(0, 0);
  cache.probability = sigmoid(logits.array()).matrix();

  result.probabilities.resize(cache.batch);
  for (Index b = 0; b < B; ++b) {
    auto& p = result.probabilities[static_cast<std::size_t>(b)];
    const std::size_t len = batch[static_cast<std::size_t>(b)].length();
    p.resize(len);
    for (std::size_t t = 0; t < len; ++t) p[t] = cache.probability(static_cast<Index>(t) * B + b);
  }
  return result;
}

std::vector<double> position_probabilities(const ModelParameters& params, const EncodedWord& word) {
  return forward_probabilities(params, std::span<const EncodedWord>(&word, 1)).probabilities.front();
}

double binary_cross_entropy(std::span<const double> probabilities, std::span<const double> targets) {
  if (probabilities.size() != targets.size()) {
    throw std::invalid_argument("binary_cross_entropy: size mismatch");
  }
  if (probabilities.empty()) return 0.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < probabilities.size(); ++i) {
    const double p = std::clamp(probabilities[i], kProbabilityClamp, 1.0 - kProbabilityClamp);
    sum += targets[i] * std::log(p) + (1.0 - targets[i]) * std::log(1.0 - p);
  }
  return -sum / static_cast<double>(probabilities.size());
}

double loss(const std::vector<std::vector<double>>& probabilities,
            std::span<const EncodedWord> batch) {
  if (probabilities.size() != batch.size()) throw std::invalid_argument("loss: batch size mismatch");
  std::vector<double> p, y;
  for (std::size_t b = 0; b < batch.size(); ++b) {
    if (probabilities[b].size() != batch[b].length()) {
      throw std::invalid_argument("loss: probability count does not match word length");
    }
    const auto& target = batch[b].target;
    for (std::size_t t = 0; t < probabilities[b].size(); ++t) {
      p.push_back(probabilities[b][t]);
      y.push_back(target.split_index == t ? 1.0 : 0.0);
    }
  }
  return binary_cross_entropy(p, y);
}

ModelParameters backward(const ModelParameters& params, const ForwardCache& cache,
                         std::span<const EncodedWord> batch, double loss_scale) {
  if (cache.batch != batch.size() || cache.layers.size() != params.layers.size() ||
      cache.probability.size() != static_cast<Index>(cache.batch * cache.steps)) {
    throw std::invalid_argument("backward: cache does not match this batch");
  }
  if (cache.fingerprint != fingerprint(params)) {
    throw std::invalid_argument("backward: cache is stale (parameters changed since forward)");
  }
  const auto B = static_cast<Index>(cache.batch);
  const auto T = static_cast<Index>(cache.steps);

  double real_positions = 0.0;
  Eigen::RowVectorXd targets = Eigen::RowVectorXd::Zero(T * B);
  for (Index b = 0; b < B; ++b) {
    const EncodedWord& w = batch[static_cast<std::size_t>(b)];
    for (Index t = 0; t < T; ++t) {
      const bool real = static_cast<std::size_t>(t) < w.length();
      const int idx = static_cast<std::size_t>(t) < w.indices.size()
                          ? w.indices[static_cast<std::size_t>(t)]
                          : CharVocab::kPad;
      if (real != (cache.mask(t * B + b) != 0.0) ||
          idx != cache.indices[static_cast<std::size_t>(t * B + b)]) {
        throw std::invalid_argument("backward: cache does not match this batch");
      }
    }
    real_positions += static_cast<double>(w.length());
    if (w.target.split_index) targets(static_cast<Index>(*w.target.split_index) * B + b) = 1.0;
  }

  ModelParameters grad;
  grad.embedding = MatrixXd::Zero(params.embedding.rows(), params.embedding.cols());
  grad.layers.resize(params.layers.size());
  for (std::size_t l = 0; l < params.layers.size(); ++l) {
    for (std::size_t d = 0; d < 2; ++d) {
      const auto& p = params.layers[l][d];
      grad.layers[l][d].input = MatrixXd::Zero(p.input.rows(), p.input.cols());
      grad.layers[l][d].recurrent = MatrixXd::Zero(p.recurrent.rows(), p.recurrent.cols());
      grad.layers[l][d].bias = MatrixXd::Zero(p.bias.rows(), 1);
    }
  }

  const Eigen::RowVectorXd d_logit = ((cache.probability - targets).array() * cache.mask.array() *
                                      (loss_scale / real_positions))
                                         .matrix();
  grad.output_weights = d_logit * cache.layers.back().output.transpose();
  grad.output_bias = MatrixXd::Constant(1, 1, d_logit.sum());

  MatrixXd d_output = params.output_weights.transpose() * d_logit;
  for (std::size_t l = params.layers.size(); l-- > 0;) {
    const LayerCache& layer = cache.layers[l];
    const Index H = params.layers[l][kForward].recurrent.cols();
    MatrixXd d_input = MatrixXd::Zero(layer.input.rows(), layer.input.cols());
    for (Direction d : {kForward, kBackward}) {
      const Index offset = d == kForward ? 0 : H;
      const MatrixXd hidden = layer.output.middleRows(offset, H);
      const MatrixXd d_hidden = d_output.middleRows(offset, H);
      d_input += backprop_direction(params.layers[l][d], grad.layers[l][d], layer.input, hidden,
                                    layer.directions[d], d_hidden, cache.mask, cache.steps,
                                    cache.batch, d);
    }
    d_output = std::move(d_input);
  }

  for (Index col = 0; col < T * B; ++col) {
    if (cache.mask(col) == 0.0) continue;
    grad.embedding.row(cache.indices[static_cast<std::size_t>(col)]) += d_output.col(col).transpose();
  }
  return grad;
}

}  // namespace decompound::neural
