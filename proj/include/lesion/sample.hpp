#pragma once

#include <array>
#include <string>

#include "lesion/tensor.hpp"

namespace lesion {

// One patient record: an RGB image in [0,1] laid out [3, H, W], the encoded
// static features (age_norm, sex_code, site_code) and the binary label.
struct Sample {
  std::string id;
  Tensor image;
  std::array<double, 3> static_features{0.0, 0.0, 0.0};
  int label = 0;
};

}  // namespace lesion
