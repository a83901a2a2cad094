#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "lesion/archive.hpp"
#include "lesion/model.hpp"
#include "lesion/tensor.hpp"

namespace lesion {

// He-normal samples, std = sqrt(2 / fan_in) where fan_in is the product of
// all axes but the first (n for [m, n], C_in*k*k for conv kernels).
Tensor kaiming_init(const Shape& shape, std::uint64_t seed);

// Per-layer stream so a layer's init does not depend on its position.
std::uint64_t layer_seed(std::uint64_t seed, std::string_view layer_name);

WeightArchive to_archive(const Model& model);
void save(const Model& model, const std::filesystem::path& path);

// Every parameter of spec, head included, taken from the archive.
Model load_model(const WeightArchive& archive, const ModelSpec& spec);

// Transfer: all non-head parameters come from the archive, the head is
// replaced by a fresh Kaiming-initialised binary layer with zero bias.
// Archive entries the model spec does not use (e.g. a 1000-way head) are ignored.
Model load_with_new_head(const WeightArchive& archive, const ModelSpec& spec, std::uint64_t seed);

}  // namespace lesion
