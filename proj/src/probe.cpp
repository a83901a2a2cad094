#include "lesion/probe.hpp"

#include <bit>
#include <fstream>
#include <iterator>
#include <limits>

#include "lesion/error.hpp"
#include "lesion/rng.hpp"

namespace lesion {

namespace {

void put_u16(std::vector<std::uint8_t>& out, std::size_t v) {
  out.push_back(static_cast<std::uint8_t>(v & 0xff));
  out.push_back(static_cast<std::uint8_t>((v >> 8) & 0xff));
}

std::size_t get_u16(std::span<const std::uint8_t> b, std::size_t at) {
  return static_cast<std::size_t>(b[at]) | (static_cast<std::size_t>(b[at + 1]) << 8);
}

}  // namespace

std::vector<std::uint8_t> serialize_probes(const ProbeBatch& batch) {
  if (batch.images.empty()) throw FormatError("probe batch is empty");
  const Shape& shape = batch.images.front().shape();
  if (shape.size() != 3) throw DimensionError("probe images must be [C, H, W], got " + to_string(shape));
  const std::size_t limit = std::numeric_limits<std::uint16_t>::max();
  if (batch.images.size() > limit || shape[0] > limit || shape[1] > limit || shape[2] > limit) {
    throw FormatError("probe extents exceed 65535");
  }
  std::vector<std::uint8_t> out;
  out.reserve(8 + batch.images.size() * numel(shape) * 4);
  put_u16(out, batch.images.size());
  for (std::size_t d : shape) put_u16(out, d);
  for (const Tensor& img : batch.images) {
    if (img.shape() != shape) {
      throw DimensionError("probe shape " + to_string(img.shape()) + " differs from " + to_string(shape));
    }
    for (double v : img.values()) {
      const std::uint32_t bits = std::bit_cast<std::uint32_t>(static_cast<float>(v));
      for (int k = 0; k < 4; ++k) out.push_back(static_cast<std::uint8_t>((bits >> (8 * k)) & 0xff));
    }
  }
  return out;
}

ProbeBatch parse_probes(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 8) throw FormatError("probe file shorter than its 8-byte header");
  const std::size_t n = get_u16(bytes, 0);
  const Shape shape{get_u16(bytes, 2), get_u16(bytes, 4), get_u16(bytes, 6)};
  if (n == 0 || shape[0] == 0 || shape[1] == 0 || shape[2] == 0) {
    throw FormatError("probe header has a zero extent");
  }
  const std::size_t per = numel(shape);
  if (bytes.size() != 8 + n * per * 4) {
    throw FormatError("probe payload is " + std::to_string(bytes.size() - 8) + " bytes, header implies " +
                      std::to_string(n * per * 4));
  }
  ProbeBatch batch;
  std::size_t at = 8;
  for (std::size_t i = 0; i < n; ++i) {
    Tensor img(shape);
    for (std::size_t j = 0; j < per; ++j, at += 4) {
      const std::uint32_t bits = static_cast<std::uint32_t>(bytes[at]) |
                                 (static_cast<std::uint32_t>(bytes[at + 1]) << 8) |
                                 (static_cast<std::uint32_t>(bytes[at + 2]) << 16) |
                                 (static_cast<std::uint32_t>(bytes[at + 3]) << 24);
      img[j] = std::bit_cast<float>(bits);
    }
    batch.images.push_back(std::move(img));
  }
  return batch;
}

void write_probes(const std::filesystem::path& path, const ProbeBatch& batch) {
  const std::vector<std::uint8_t> bytes = serialize_probes(batch);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write probe file '" + path.string() + "'");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("failed writing probe file '" + path.string() + "'");
}

ProbeBatch read_probes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read probe file '" + path.string() + "'");
  const std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_probes(bytes);
}

ProbeBatch random_probes(std::size_t n, const Shape& image_shape, std::uint64_t seed) {
  Rng rng(seed);
  ProbeBatch batch;
  for (std::size_t i = 0; i < n; ++i) {
    Tensor img(image_shape);
    for (std::size_t j = 0; j < img.size(); ++j) img[j] = static_cast<float>(rng.uniform());
    batch.images.push_back(std::move(img));
  }
  return batch;
}

std::vector<double> forward_probes(const Model& model, const ProbeBatch& batch) {
  const Tensor zeros(Shape{model.spec().static_dim});
  std::vector<double> logits;
  logits.reserve(batch.images.size());
  for (const Tensor& img : batch.images) logits.push_back(forward(model, img, zeros, false).item());
  return logits;
}

}  // namespace lesion
