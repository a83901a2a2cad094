#include "lesion/adam.hpp"

#include <cmath>

#include "lesion/error.hpp"

namespace lesion {

void adam_step(std::vector<Parameter>& params, std::span<const Tensor> grads, AdamState& state,
               double learning_rate, const std::vector<bool>& frozen) {
  if (grads.size() != params.size()) {
    throw ContractError("adam_step: " + std::to_string(grads.size()) + " gradients for " +
                        std::to_string(params.size()) + " parameters");
  }
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (grads[i].shape() != params[i].value.shape()) {
      throw DimensionError("adam_step: gradient " + to_string(grads[i].shape()) + " for parameter " +
                           params[i].name + " " + to_string(params[i].value.shape()));
    }
    if (!grads[i].all_finite()) throw TrainingError("non-finite gradient in layer parameter '" + params[i].name + "'");
  }
  if (state.first_moment.empty()) {
    for (const Parameter& p : params) {
      state.first_moment.emplace_back(p.value.size(), 0.0);
      state.second_moment.emplace_back(p.value.size(), 0.0);
    }
  }
  ++state.step;
  const double t = static_cast<double>(state.step);
  const double c1 = 1.0 - std::pow(kAdamBeta1, t);
  const double c2 = 1.0 - std::pow(kAdamBeta2, t);
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (!frozen.empty() && frozen[i]) continue;
    std::span<double> w = params[i].value.values();
    std::span<const double> g = grads[i].values();
    std::vector<double>& m = state.first_moment[i];
    std::vector<double>& v = state.second_moment[i];
    for (std::size_t j = 0; j < w.size(); ++j) {
      m[j] = kAdamBeta1 * m[j] + (1.0 - kAdamBeta1) * g[j];
      v[j] = kAdamBeta2 * v[j] + (1.0 - kAdamBeta2) * g[j] * g[j];
      const double m_hat = m[j] / c1;
      const double v_hat = v[j] / c2;
      w[j] -= learning_rate * m_hat / (std::sqrt(v_hat) + kAdamEpsilon);
    }
  }
}

}  // namespace lesion
