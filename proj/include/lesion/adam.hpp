#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "lesion/model.hpp"
#include "lesion/tensor.hpp"

namespace lesion {

struct AdamState {
  std::vector<std::vector<double>> first_moment;
  std::vector<std::vector<double>> second_moment;
  std::size_t step = 0;
};

inline constexpr double kAdamBeta1 = 0.9;
inline constexpr double kAdamBeta2 = 0.999;
inline constexpr double kAdamEpsilon = 1e-8;

// One bias-corrected Adam update of params from grads (aligned by index).
// Entries with frozen[i] set are left untouched. A NaN or infinite gradient
// raises TrainingError naming the parameter.
void adam_step(std::vector<Parameter>& params, std::span<const Tensor> grads, AdamState& state,
               double learning_rate, const std::vector<bool>& frozen = {});

}  // namespace lesion
