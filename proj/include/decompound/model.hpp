#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace decompound::neural {

struct ModelConfig {
  std::size_t embed_dim = 128;
  std::size_t hidden_dim = 128;  // per direction
  std::size_t num_layers = 1;    // 1 or 2
  std::size_t max_len = 40;
  double learning_rate = 0.001;
  std::size_t max_epochs = 100;
  std::size_t patience = 20;
  std::size_t batch_size = 64;
  std::uint64_t seed = 1;

  // Throws std::invalid_argument describing the first violated constraint.
  void validate() const;
};

enum Direction : std::size_t { kForward = 0, kBackward = 1 };

// Weights of one LSTM direction. Gate rows are stacked in the order
// input, forget, cell candidate, output.
struct DirectionWeights {
  Eigen::MatrixXd input;      // 4H x input_dim
  Eigen::MatrixXd recurrent;  // 4H x H
  Eigen::MatrixXd bias;       // 4H x 1
};

struct ModelParameters {
  Eigen::MatrixXd embedding;  // vocab x embed_dim
  std::vector<std::array<DirectionWeights, 2>> layers;
  Eigen::MatrixXd output_weights;  // 1 x 2H
  Eigen::MatrixXd output_bias;     // 1 x 1

  static ModelParameters zeros(const ModelConfig& config, std::size_t vocab_size);
  // Uniform(-0.1, 0.1) weights, zero biases.
  static ModelParameters initialize(const ModelConfig& config, std::size_t vocab_size,
                                    std::uint64_t seed);

  std::size_t hidden_dim() const { return static_cast<std::size_t>(layers.at(0)[0].recurrent.cols()); }

  // Visits every tensor in a fixed order with its serialized name.
  template <typename F>
  void for_each(F&& f) {
    visit(*this, f);
  }
  template <typename F>
  void for_each(F&& f) const {
    visit(*this, f);
  }

  std::vector<std::string> tensor_names() const;
  std::size_t parameter_count() const;
  bool all_finite() const;

 private:
  template <typename Self, typename F>
  static void visit(Self& self, F& f) {
    f(std::string("embedding"), self.embedding);
    for (std::size_t l = 0; l < self.layers.size(); ++l) {
      for (std::size_t d = 0; d < 2; ++d) {
        const std::string prefix =
            "lstm." + std::to_string(l) + (d == kForward ? ".fwd." : ".bwd.");
        f(prefix + "input", self.layers[l][d].input);
        f(prefix + "recurrent", self.layers[l][d].recurrent);
        f(prefix + "bias", self.layers[l][d].bias);
      }
    }
    f(std::string("output.weight"), self.output_weights);
    f(std::string("output.bias"), self.output_bias);
  }
};

// True when every tensor of `a` and `b` has the same name and shape.
bool same_shapes(const ModelParameters& a, const ModelParameters& b);

}  // namespace decompound::neural
