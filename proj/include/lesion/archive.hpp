#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lesion/tensor.hpp"

namespace lesion {

inline constexpr std::string_view kArchiveMagic = "LSNBW001";

struct ArchiveEntry {
  std::string name;
  Shape shape;
  std::uint64_t byte_offset = 0;  // relative to the start of the payload

  friend bool operator==(const ArchiveEntry&, const ArchiveEntry&) = default;
};

// Named float32 tensors in a single little-endian payload.
//
// File layout (all integers little-endian):
//   magic        8 bytes  "LSNBW001"
//   entry_count  u32
//   per entry:   u32 name_len, name bytes (UTF-8),
//                u32 rank, u64 dims[rank], u64 byte_offset
//   payload_len  u64
//   payload      payload_len bytes of float32, row-major per entry
//
// Entries must cover the payload exactly without overlap. The writer emits
// them in ascending offset order; the reader accepts any manifest order.
class WeightArchive {
 public:
  WeightArchive() = default;

  // Appends a tensor, rounding each value to the nearest float32.
  void add(const std::string& name, const Tensor& tensor);

  const std::vector<ArchiveEntry>& manifest() const { return manifest_; }
  std::span<const float> payload() const { return payload_; }
  const ArchiveEntry* find(std::string_view name) const;
  bool contains(std::string_view name) const { return find(name) != nullptr; }

  // Values widened back to 64-bit.
  Tensor tensor(std::string_view name) const;

  std::vector<std::uint8_t> serialize() const;
  static WeightArchive parse(std::span<const std::uint8_t> bytes);

  void write(const std::filesystem::path& path) const;
  static WeightArchive read(const std::filesystem::path& path);

  friend bool operator==(const WeightArchive&, const WeightArchive&) = default;

 private:
  std::vector<ArchiveEntry> manifest_;
  std::vector<float> payload_;
};

}  // namespace lesion
