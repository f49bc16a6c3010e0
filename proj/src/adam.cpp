#include "decompound/adam.hpp"

#include <cmath>
#include <string>

namespace decompound::neural {

AdamState AdamState::for_parameters(const ModelParameters& params) {
  AdamState state;
  params.for_each([&](const std::string&, const Eigen::MatrixXd& m) {
    state.first_moment.push_back(Eigen::MatrixXd::Zero(m.rows(), m.cols()));
    state.second_moment.push_back(Eigen::MatrixXd::Zero(m.rows(), m.cols()));
  });
  return state;
}

void adam_step(ModelParameters& params, const ModelParameters& grads, AdamState& state,
               double learning_rate) {
  if (!same_shapes(params, grads)) {
    throw std::invalid_argument("adam_step: gradient shapes do not match parameters");
  }
  std::vector<const Eigen::MatrixXd*> g;
  grads.for_each([&](const std::string& name, const Eigen::MatrixXd& m) {
    if (!m.allFinite()) throw NonFiniteGradient("non-finite gradient in tensor '" + name + "'");
    g.push_back(&m);
  });
  if (state.first_moment.size() != g.size() || state.second_moment.size() != g.size()) {
    throw std::invalid_argument("adam_step: optimizer state does not match parameters");
  }
  for (std::size_t k = 0; k < g.size(); ++k) {
    if (state.first_moment[k].rows() != g[k]->rows() || state.first_moment[k].cols() != g[k]->cols() ||
        state.second_moment[k].rows() != g[k]->rows() || state.second_moment[k].cols() != g[k]->cols()) {
      throw std::invalid_argument("adam_step: optimizer state does not match parameters");
    }
  }

  ++state.step;
  const double t = static_cast<double>(state.step);
  const double correction1 = 1.0 - std::pow(state.beta1, t);
  const double correction2 = 1.0 - std::pow(state.beta2, t);
  std::size_t k = 0;
  params.for_each([&](const std::string&, Eigen::MatrixXd& theta) {
    Eigen::MatrixXd& m = state.first_moment[k];
    Eigen::MatrixXd& v = state.second_moment[k];
    const Eigen::MatrixXd& grad = *g[k];
    m = state.beta1 * m + (1.0 - state.beta1) * grad;
    v = state.beta2 * v + (1.0 - state.beta2) * grad.cwiseProduct(grad);
    theta.array() -= learning_rate * (m.array() / correction1) /
                     ((v.array() / correction2).sqrt() + state.epsilon);
    ++k;
  });
}

}  // namespace decompound::neural
