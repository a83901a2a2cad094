#include "lesion/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

#include "lesion/error.hpp"
#include "lesion/image_io.hpp"
#include "lesion/rng.hpp"

namespace lesion {

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

// One CSV record; double quotes delimit fields that contain commas.
std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(trim(cur));
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  fields.push_back(trim(cur));
  return fields;
}

std::filesystem::path find_image(const std::filesystem::path& dir, const std::string& name) {
  const std::filesystem::path direct = dir / name;
  if (direct.has_extension() && std::filesystem::is_regular_file(direct)) return direct;
  for (const char* ext : {".png", ".jpg", ".jpeg", ".ppm", ".JPG", ".PNG"}) {
    std::filesystem::path candidate = dir / (name + ext);
    if (std::filesystem::is_regular_file(candidate)) return candidate;
  }
  return {};
}

}  // namespace

std::size_t site_index(std::string_view site) {
  const std::string key = lower(trim(site));
  for (std::size_t i = 0; i < kSites.size(); ++i) {
    if (key == kSites[i]) return i;
  }
  throw DataError("unknown body site '" + std::string(site) + "'");
}

std::array<double, 3> encode_static(double age, std::string_view sex, std::string_view site) {
  if (!std::isfinite(age)) throw DataError("age must be finite");
  const std::string s = lower(trim(sex));
  double sex_code = 0.0;
  if (s == "male") {
    sex_code = 1.0;
  } else if (s != "female") {
    throw DataError("unknown sex '" + std::string(sex) + "' (expected male or female)");
  }
  return {std::clamp(age / 100.0, 0.0, 1.0), sex_code, static_cast<double>(site_index(site)) / 5.0};
}

DecodedStatic decode_static(const std::array<double, 3>& features) {
  DecodedStatic out;
  out.age = features[0] * 100.0;
  out.sex = features[1] >= 0.5 ? "male" : "female";
  const long idx = std::lround(features[2] * 5.0);
  if (idx < 0 || idx >= static_cast<long>(kSites.size())) throw DataError("site code out of range");
  out.site = std::string(kSites[static_cast<std::size_t>(idx)]);
  return out;
}

std::vector<Sample> ingest(const std::filesystem::path& image_dir,
                           const std::filesystem::path& metadata_file,
                           const IngestOptions& options) {
  std::ifstream in(metadata_file);
  if (!in) throw IoError("cannot open metadata file '" + metadata_file.string() + "'");
  std::string line;
  if (!std::getline(in, line)) throw DataError("metadata file is empty");
  if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
  const std::vector<std::string> header = split_csv_line(line);
  std::map<std::string, std::size_t> column;
  for (std::size_t i = 0; i < header.size(); ++i) column[lower(header[i])] = i;
  for (const char* required : {"image_name", "age", "sex", "site", "target"}) {
    if (!column.count(required)) {
      throw DataError(std::string("metadata schema error: missing column '") + required + "'");
    }
  }

  std::vector<Sample> samples;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (trim(line).empty()) continue;
    const std::vector<std::string> f = split_csv_line(line);
    if (f.size() != header.size()) {
      throw DataError("metadata row " + std::to_string(row) + " has " + std::to_string(f.size()) +
                      " fields, header has " + std::to_string(header.size()));
    }
    Sample s;
    s.id = f[column["image_name"]];
    const std::string where = "row " + std::to_string(row) + " ('" + s.id + "')";
    const std::string& target = f[column["target"]];
    if (target == "0") {
      s.label = 0;
    } else if (target == "1") {
      s.label = 1;
    } else {
      throw DataError(where + ": target must be 0 or 1, got '" + target + "'");
    }
    double age = 0.0;
    try {
      std::size_t used = 0;
      age = std::stod(f[column["age"]], &used);
      if (used != f[column["age"]].size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw DataError(where + ": age '" + f[column["age"]] + "' is not a number");
    }
    try {
      s.static_features = encode_static(age, f[column["sex"]], f[column["site"]]);
    } catch (const DataError& e) {
      throw DataError(where + ": " + e.what());
    }
    const std::filesystem::path image_path = find_image(image_dir, s.id);
    if (image_path.empty()) throw DataError(where + ": image file not found in '" + image_dir.string() + "'");
    s.image = resize_bilinear(read_rgb_image(image_path), options.height, options.width);
    samples.push_back(std::move(s));
  }
  return samples;
}

void write_dataset(const std::filesystem::path& dir, std::span<const Sample> samples) {
  std::filesystem::create_directories(dir / "images");
  std::ofstream meta(dir / "metadata.csv", std::ios::binary | std::ios::trunc);
  if (!meta) throw IoError("cannot write '" + (dir / "metadata.csv").string() + "'");
  meta << "image_name,age,sex,site,target\n";
  for (const Sample& s : samples) {
    const DecodedStatic d = decode_static(s.static_features);
    meta << s.id << ',' << std::lround(d.age) << ',' << d.sex << ',' << d.site << ',' << s.label << '\n';
    write_png(dir / "images" / (s.id + ".png"), s.image);
  }
  if (!meta) throw IoError("failed writing metadata");
}

DatasetSplit split(std::span<const Sample> samples, std::uint64_t seed) {
  std::array<std::vector<std::string>, 2> by_class;
  for (const Sample& s : samples) by_class[static_cast<std::size_t>(s.label)].push_back(s.id);
  DatasetSplit out;
  for (int label = 0; label < 2; ++label) {
    std::vector<std::string>& ids = by_class[static_cast<std::size_t>(label)];
    if (ids.size() < 5) {
      throw DataError("stratified split needs at least 5 samples of class " + std::to_string(label) +
                      ", got " + std::to_string(ids.size()));
    }
    Rng rng(derive_seed({seed, static_cast<std::uint64_t>(label), 0x5e11ULL}));
    for (std::size_t i = ids.size() - 1; i > 0; --i) std::swap(ids[i], ids[rng.below(i + 1)]);
    const double n = static_cast<double>(ids.size());
    const auto n_train = static_cast<std::size_t>(std::llround(0.6 * n));
    const auto n_valid = static_cast<std::size_t>(std::llround(0.2 * n));
    auto it = ids.begin();
    out.train.insert(out.train.end(), it, it + static_cast<std::ptrdiff_t>(n_train));
    it += static_cast<std::ptrdiff_t>(n_train);
    out.valid.insert(out.valid.end(), it, it + static_cast<std::ptrdiff_t>(n_valid));
    it += static_cast<std::ptrdiff_t>(n_valid);
    out.test.insert(out.test.end(), it, ids.end());
  }
  return out;
}

std::string split_to_json(const DatasetSplit& split) {
  nlohmann::ordered_json j;
  j["train"] = split.train;
  j["valid"] = split.valid;
  j["test"] = split.test;
  return j.dump(1) + "\n";
}

DatasetSplit split_from_json(const std::string& text) {
  try {
    const auto j = nlohmann::json::parse(text);
    return {j.at("train").get<std::vector<std::string>>(), j.at("valid").get<std::vector<std::string>>(),
            j.at("test").get<std::vector<std::string>>()};
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed split file: ") + e.what());
  }
}

std::vector<Sample> select(std::span<const Sample> samples, std::span<const std::string> ids) {
  std::unordered_map<std::string_view, const Sample*> index;
  for (const Sample& s : samples) index.emplace(s.id, &s);
  std::vector<Sample> out;
  out.reserve(ids.size());
  for (const std::string& id : ids) {
    auto it = index.find(id);
    if (it == index.end()) throw DataError("sample '" + id + "' not found");
    out.push_back(*it->second);
  }
  return out;
}

}  // namespace lesion
