#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "lesion/model.hpp"
#include "lesion/tensor.hpp"

namespace lesion {

// Probe file: four little-endian u16 extents N, C, H, W followed by
// N*C*H*W little-endian float32 values in row-major order.
struct ProbeBatch {
  std::vector<Tensor> images;  // each [C, H, W]
};

std::vector<std::uint8_t> serialize_probes(const ProbeBatch& batch);
ProbeBatch parse_probes(std::span<const std::uint8_t> bytes);
void write_probes(const std::filesystem::path& path, const ProbeBatch& batch);
ProbeBatch read_probes(const std::filesystem::path& path);

// Uniform [0, 1) pixels, rounded to float32.
ProbeBatch random_probes(std::size_t n, const Shape& image_shape, std::uint64_t seed);

// One logit per probe. Static features are all zero.
std::vector<double> forward_probes(const Model& model, const ProbeBatch& batch);

}  // namespace lesion
