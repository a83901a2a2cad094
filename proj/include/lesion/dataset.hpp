#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lesion/sample.hpp"

namespace lesion {

// Body sites in fixed index order; site_code = index / 5.
inline constexpr std::array<std::string_view, 6> kSites = {
    "torso", "lower extremity", "upper extremity", "head/neck", "palms/soles", "oral/genital"};

std::size_t site_index(std::string_view site);

std::array<double, 3> encode_static(double age, std::string_view sex, std::string_view site);

struct DecodedStatic {
  double age = 0.0;
  std::string sex;
  std::string site;
};
DecodedStatic decode_static(const std::array<double, 3>& features);

struct IngestOptions {
  std::size_t height = 224;
  std::size_t width = 224;
};

// Reads a metadata table with header columns image_name,age,sex,site,target
// and loads <image_dir>/<image_name>[.png|.jpg|.jpeg|.ppm] for each row.
std::vector<Sample> ingest(const std::filesystem::path& image_dir,
                           const std::filesystem::path& metadata_file,
                           const IngestOptions& options = {});

// Writes samples in the layout ingest() reads: metadata.csv plus
// images/<id>.png.
void write_dataset(const std::filesystem::path& dir, std::span<const Sample> samples);

struct DatasetSplit {
  std::vector<std::string> train;
  std::vector<std::string> valid;
  std::vector<std::string> test;

  friend bool operator==(const DatasetSplit&, const DatasetSplit&) = default;
};

// Stratified 60/20/20 split, deterministic in seed. Each class needs at
// least five samples.
DatasetSplit split(std::span<const Sample> samples, std::uint64_t seed);

std::string split_to_json(const DatasetSplit& split);
DatasetSplit split_from_json(const std::string& text);

// Samples whose ids appear in ids, in the order of ids.
std::vector<Sample> select(std::span<const Sample> samples, std::span<const std::string> ids);

}  // namespace lesion
