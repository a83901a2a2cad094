#pragma once

#include <cstddef>
#include <filesystem>

#include "lesion/tensor.hpp"

namespace lesion {

// Decodes an 8-bit RGB raster (PNG, JPEG or binary PPM, detected by
// content) into a [3, H, W] tensor with values in [0, 1].
Tensor read_rgb_image(const std::filesystem::path& path);

// Writes a [3, H, W] tensor as 8-bit PNG; values are clamped and rounded.
void write_png(const std::filesystem::path& path, const Tensor& image);

// Writes an [H, W] tensor in [0, 1] as a binary portable graymap (P5).
void write_pgm(const std::filesystem::path& path, const Tensor& gray);

// Half-pixel-centre bilinear resampling of a [C, H, W] tensor.
Tensor resize_bilinear(const Tensor& image, std::size_t height, std::size_t width);

// Rounds every value to the nearest multiple of 1/255, as an 8-bit
// round trip would.
Tensor quantize_8bit(Tensor image);

}  // namespace lesion
