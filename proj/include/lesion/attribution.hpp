#pragma once

#include <cstddef>
#include <optional>

#include "lesion/model.hpp"
#include "lesion/sample.hpp"
#include "lesion/tensor.hpp"

namespace lesion {

enum class BaselineKind { black, custom };
enum class AttributionTarget { logit, probability };

struct AttributionMap {
  Tensor phi;                     // same shape as the input image
  double completeness_gap = 0.0;  // |sum(phi) - (f(x) - f(b))|
  std::size_t steps_used = 0;
  BaselineKind baseline_kind = BaselineKind::black;
  double output_at_input = 0.0;     // f(x)
  double output_at_baseline = 0.0;  // f(b)
};

struct IntegratedGradientsOptions {
  std::size_t steps = 256;
  // Black image when unset.
  std::optional<Tensor> baseline;
  AttributionTarget target = AttributionTarget::logit;
  // If the gap exceeds 1% of |f(x) - f(b)|, recompute once with this many
  // steps. Zero disables the retry.
  std::size_t tighten_steps = 512;
};

// Path-integrated gradients along the straight line from the baseline to
// the image, midpoint rule:
//   phi_i = (x_i - b_i) / m * sum_{k=1..m} df/dx_i at b + ((k - 0.5)/m)(x - b).
// Static features are held at the sample's values throughout.
AttributionMap integrated_gradients(const Model& model, const Sample& sample,
                                    const IntegratedGradientsOptions& options = {});

enum class RenderMode { signed_values, absolute };

// [H, W] grayscale in [0, 1]. Absolute: channel-summed |phi|, min-max
// normalised. Signed: channel-summed phi mapped to 0.5 + 0.5 * v / max|v|.
// An all-zero map renders uniform mid-gray.
Tensor render_map(const AttributionMap& map, RenderMode mode);

}  // namespace lesion
