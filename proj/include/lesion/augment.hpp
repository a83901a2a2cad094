#pragma once

#include <cstdint>

#include "lesion/sample.hpp"
#include "lesion/tensor.hpp"

namespace lesion {

struct AugmentationPolicy {
  double rotation_max_deg = 25.0;
  double horizontal_flip_p = 0.5;
  double vertical_flip_p = 0.5;
  double resize_scale_min = 0.8;  // side fraction kept by the random crop
  double resize_scale_max = 1.0;
  double brightness_delta_max = 0.1;
  double saturation_delta_max = 0.1;
  std::uint64_t seed = 0;

  void validate() const;

  // Every transform disabled; augment() then returns the image unchanged.
  static AugmentationPolicy identity();
};

// Randomised copy of sample: rotate (bilinear, reflect padding), crop and
// resize back, horizontal/vertical flips, brightness shift, HSV saturation
// scaling, clamp to [0, 1]. The random stream depends only on
// (policy.seed, sample.id, epoch_nonce). Label and static features are kept.
Sample augment(const Sample& sample, const AugmentationPolicy& policy, std::uint64_t epoch_nonce);

Tensor flip_horizontal(const Tensor& image);
Tensor flip_vertical(const Tensor& image);
Tensor rotate(const Tensor& image, double degrees);
// Crop of side fraction scale with top-left corner at fractional offsets
// (oy, ox) in [0, 1] of the free range, resized back to the input size.
Tensor crop_resize(const Tensor& image, double scale, double oy, double ox);
Tensor adjust_saturation(const Tensor& image, double factor);

}  // namespace lesion
