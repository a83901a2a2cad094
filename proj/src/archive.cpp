#include "lesion/archive.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <set>

#include "lesion/error.hpp"

namespace lesion {

namespace {

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void put_u64(std::vector<std::uint8_t>& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  std::span<const std::uint8_t> take(std::size_t n) {
    if (n > bytes_.size() - pos_) {
      throw FormatError("weight archive truncated at byte " + std::to_string(pos_));
    }
    auto out = bytes_.subspan(pos_, n);
    pos_ += n;
    return out;
  }
  std::uint32_t u32() {
    auto b = take(4);
    std::uint32_t v = 0;
    for (int i = 3; i >= 0; --i) v = (v << 8) | b[i];
    return v;
  }
  std::uint64_t u64() {
    auto b = take(8);
    std::uint64_t v = 0;
    for (int i = 7; i >= 0; --i) v = (v << 8) | b[i];
    return v;
  }
  std::size_t remaining() const { return bytes_.size() - pos_; }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

void WeightArchive::add(const std::string& name, const Tensor& tensor) {
  if (contains(name)) throw FormatError("duplicate archive entry '" + name + "'");
  manifest_.push_back({name, tensor.shape(), payload_.size() * sizeof(float)});
  for (double v : tensor.values()) payload_.push_back(static_cast<float>(v));
}

const ArchiveEntry* WeightArchive::find(std::string_view name) const {
  for (const ArchiveEntry& e : manifest_) {
    if (e.name == name) return &e;
  }
  return nullptr;
}

Tensor WeightArchive::tensor(std::string_view name) const {
  const ArchiveEntry* e = find(name);
  if (!e) throw FormatError("archive has no entry '" + std::string(name) + "'");
  const std::size_t first = e->byte_offset / sizeof(float);
  std::vector<double> values(numel(e->shape));
  for (std::size_t i = 0; i < values.size(); ++i) values[i] = payload_[first + i];
  return Tensor(e->shape, std::move(values));
}

std::vector<std::uint8_t> WeightArchive::serialize() const {
  std::vector<std::uint8_t> out(kArchiveMagic.begin(), kArchiveMagic.end());
  put_u32(out, static_cast<std::uint32_t>(manifest_.size()));
  for (const ArchiveEntry& e : manifest_) {
    put_u32(out, static_cast<std::uint32_t>(e.name.size()));
    out.insert(out.end(), e.name.begin(), e.name.end());
    put_u32(out, static_cast<std::uint32_t>(e.shape.size()));
    for (std::size_t d : e.shape) put_u64(out, d);
    put_u64(out, e.byte_offset);
  }
  put_u64(out, payload_.size() * sizeof(float));
  for (float f : payload_) put_u32(out, std::bit_cast<std::uint32_t>(f));
  return out;
}

WeightArchive WeightArchive::parse(std::span<const std::uint8_t> bytes) {
  Reader in(bytes);
  auto magic = in.take(kArchiveMagic.size());
  if (!std::equal(magic.begin(), magic.end(), kArchiveMagic.begin())) {
    throw FormatError("not a weight archive (bad magic)");
  }
  WeightArchive archive;
  const std::uint32_t count = in.u32();
  std::set<std::string> names;
  for (std::uint32_t i = 0; i < count; ++i) {
    ArchiveEntry e;
    auto name = in.take(in.u32());
    e.name.assign(name.begin(), name.end());
    if (!names.insert(e.name).second) throw FormatError("duplicate archive entry '" + e.name + "'");
    const std::uint32_t rank = in.u32();
    if (rank == 0 || rank > 8) throw FormatError("entry '" + e.name + "' has invalid rank");
    for (std::uint32_t r = 0; r < rank; ++r) {
      const std::uint64_t d = in.u64();
      if (d == 0 || d > (1ULL << 32)) throw FormatError("entry '" + e.name + "' has invalid extent");
      e.shape.push_back(static_cast<std::size_t>(d));
    }
    e.byte_offset = in.u64();
    archive.manifest_.push_back(std::move(e));
  }
  const std::uint64_t payload_bytes = in.u64();
  if (payload_bytes % sizeof(float) != 0) throw FormatError("payload length is not a multiple of 4");
  if (payload_bytes != in.remaining()) {
    throw FormatError("payload declares " + std::to_string(payload_bytes) + " bytes but " +
                      std::to_string(in.remaining()) + " are present");
  }

  // Entries must tile the payload exactly.
  std::vector<const ArchiveEntry*> by_offset;
  for (const ArchiveEntry& e : archive.manifest_) by_offset.push_back(&e);
  std::sort(by_offset.begin(), by_offset.end(),
            [](const ArchiveEntry* a, const ArchiveEntry* b) { return a->byte_offset < b->byte_offset; });
  std::uint64_t cursor = 0;
  for (const ArchiveEntry* e : by_offset) {
    if (e->byte_offset != cursor) {
      throw FormatError("entry '" + e->name + "' at offset " + std::to_string(e->byte_offset) +
                        " leaves a gap or overlap (expected " + std::to_string(cursor) + ")");
    }
    cursor += numel(e->shape) * sizeof(float);
  }
  if (cursor != payload_bytes) {
    throw FormatError("manifest covers " + std::to_string(cursor) + " bytes, payload has " +
                      std::to_string(payload_bytes));
  }

  auto raw = in.take(payload_bytes);
  archive.payload_.resize(payload_bytes / sizeof(float));
  for (std::size_t i = 0; i < archive.payload_.size(); ++i) {
    std::uint32_t v = 0;
    for (int b = 3; b >= 0; --b) v = (v << 8) | raw[i * 4 + b];
    archive.payload_[i] = std::bit_cast<float>(v);
  }
  return archive;
}

void WeightArchive::write(const std::filesystem::path& path) const {
  const std::vector<std::uint8_t> bytes = serialize();
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

WeightArchive WeightArchive::read(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open weight archive '" + path.string() + "'");
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse(bytes);
}

}  // namespace lesion
