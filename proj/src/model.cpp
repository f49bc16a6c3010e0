#include "decompound/model.hpp"

#include <random>
#include <stdexcept>

namespace decompound::neural {

void ModelConfig::validate() const {
  if (embed_dim < 1) throw std::invalid_argument("embed_dim must be >= 1");
  if (hidden_dim < 1) throw std::invalid_argument("hidden_dim must be >= 1");
  if (num_layers != 1 && num_layers != 2) throw std::invalid_argument("num_layers must be 1 or 2");
  if (max_len < 1) throw std::invalid_argument("max_len must be >= 1");
  if (!(learning_rate > 0.0)) throw std::invalid_argument("learning_rate must be > 0");
  if (max_epochs < 1) throw std::invalid_argument("max_epochs must be >= 1");
  if (patience > max_epochs) throw std::invalid_argument("patience must not exceed max_epochs");
  if (batch_size < 1) throw std::invalid_argument("batch_size must be >= 1");
}

ModelParameters ModelParameters::zeros(const ModelConfig& config, std::size_t vocab_size) {
  config.validate();
  const auto H = static_cast<Eigen::Index>(config.hidden_dim);
  const auto E = static_cast<Eigen::Index>(config.embed_dim);
  ModelParameters p;
  p.embedding = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(vocab_size), E);
  p.layers.resize(config.num_layers);
  for (std::size_t l = 0; l < config.num_layers; ++l) {
    const Eigen::Index in = l == 0 ? E : 2 * H;
    for (auto& dir : p.layers[l]) {
      dir.input = Eigen::MatrixXd::Zero(4 * H, in);
      dir.recurrent = Eigen::MatrixXd::Zero(4 * H, H);
      dir.bias = Eigen::MatrixXd::Zero(4 * H, 1);
    }
  }
  p.output_weights = Eigen::MatrixXd::Zero(1, 2 * H);
  p.output_bias = Eigen::MatrixXd::Zero(1, 1);
  return p;
}

ModelParameters ModelParameters::initialize(const ModelConfig& config, std::size_t vocab_size,
                                            std::uint64_t seed) {
  ModelParameters p = zeros(config, vocab_size);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uniform(-0.1, 0.1);
  auto fill = [&](Eigen::MatrixXd& m) {
    // Column-major fill; fixed order keeps initialization reproducible.
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      for (Eigen::Index i = 0; i < m.rows(); ++i) m(i, j) = uniform(rng);
    }
  };
  fill(p.embedding);
  for (auto& layer : p.layers) {
    for (auto& dir : layer) {
      fill(dir.input);
      fill(dir.recurrent);
    }
  }
  fill(p.output_weights);
  return p;
}

std::vector<std::string> ModelParameters::tensor_names() const {
  std::vector<std::string> names;
  for_each([&](const std::string& name, const Eigen::MatrixXd&) { names.push_back(name); });
  return names;
}

std::size_t ModelParameters::parameter_count() const {
  std::size_t n = 0;
  for_each([&](const std::string&, const Eigen::MatrixXd& m) { n += static_cast<std::size_t>(m.size()); });
  return n;
}

bool ModelParameters::all_finite() const {
  bool finite = true;
  for_each([&](const std::string&, const Eigen::MatrixXd& m) { finite = finite && m.allFinite(); });
  return finite;
}

bool same_shapes(const ModelParameters& a, const ModelParameters& b) {
  std::vector<std::tuple<std::string, Eigen::Index, Eigen::Index>> sa, sb;
  a.for_each([&](const std::string& n, const Eigen::MatrixXd& m) { sa.emplace_back(n, m.rows(), m.cols()); });
  b.for_each([&](const std::string& n, const Eigen::MatrixXd& m) { sb.emplace_back(n, m.rows(), m.cols()); });
  return sa == sb;
}

}  // namespace decompound::neural
