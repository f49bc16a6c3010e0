#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "decompound/model.hpp"

namespace decompound::neural {

class NonFiniteGradient : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct AdamState {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  std::uint64_t step = 0;
  std::vector<Eigen::MatrixXd> first_moment;   // same order as ModelParameters::for_each
  std::vector<Eigen::MatrixXd> second_moment;

  static AdamState for_parameters(const ModelParameters& params);
};

// Bias-corrected Adam update:
//   m <- b1 m + (1 - b1) g,  v <- b2 v + (1 - b2) g^2,
//   theta <- theta - lr * (m / (1 - b1^t)) / (sqrt(v / (1 - b2^t)) + eps).
// Throws NonFiniteGradient (leaving params and state untouched) if any
// gradient entry is NaN or infinite.
void adam_step(ModelParameters& params, const ModelParameters& grads, AdamState& state,
               double learning_rate);

}  // namespace decompound::neural
