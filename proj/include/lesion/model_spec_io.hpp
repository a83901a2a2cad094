#pragma once

#include <filesystem>
#include <string>

#include "lesion/model.hpp"

namespace lesion {

// JSON model-spec files. Layout:
// {
//   "input_shape": [3, H, W],
//   "static_dim": 3,
//   "image_branch":  [ {"name": "conv1", "type": "conv2d", "in_channels": 3, ...}, ... ],
//   "static_branch": [ ... ],
//   "head": {"name": "head", "type": "linear", "in_features": 80, "out_features": 1}
// }
// Layer keys per type: conv2d {in_channels, out_channels, kernel, stride, padding},
// max_pool2d {window}, dropout {rate}, linear {in_features, out_features};
// relu and flatten take only name and type.
std::string model_spec_to_json(const ModelSpec& spec);
ModelSpec model_spec_from_json(const std::string& text);

void write_model_spec(const ModelSpec& spec, const std::filesystem::path& path);
ModelSpec read_model_spec(const std::filesystem::path& path);

}  // namespace lesion
