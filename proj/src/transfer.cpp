#include "lesion/transfer.hpp"

#include <cmath>
#include <sstream>
#include <vector>

#include "lesion/error.hpp"
#include "lesion/rng.hpp"

namespace lesion {

Tensor kaiming_init(const Shape& shape, std::uint64_t seed) {
  if (shape.empty()) throw ConfigError("kaiming_init: empty shape");
  std::size_t fan_in = 1;
  for (std::size_t i = 1; i < shape.size(); ++i) fan_in *= shape[i];
  if (shape.size() < 2 || fan_in == 0) throw ConfigError("kaiming_init: fan_in must be >= 1");
  const double std_dev = std::sqrt(2.0 / static_cast<double>(fan_in));
  Rng rng(seed);
  Tensor out(shape);
  for (double& v : out.values()) v = std_dev * rng.normal();
  return out;
}

std::uint64_t layer_seed(std::uint64_t seed, std::string_view layer_name) {
  return derive_seed({seed, hash_string(layer_name)});
}

WeightArchive to_archive(const Model& model) {
  WeightArchive archive;
  for (const Parameter& p : model.parameters()) archive.add(p.name, p.value);
  return archive;
}

void save(const Model& model, const std::filesystem::path& path) { to_archive(model).write(path); }

namespace {

// Collects every problem before failing so the caller sees the full list.
void check_entries(const WeightArchive& archive, const ModelSpec& spec, bool include_head) {
  std::vector<std::string> missing;
  std::ostringstream mismatched;
  bool any_mismatch = false;
  for (const auto& [name, shape] : parameter_shapes(spec)) {
    if (!include_head && name.rfind(spec.head.name + ".", 0) == 0) continue;
    const ArchiveEntry* e = archive.find(name);
    if (!e) {
      missing.push_back(name);
    } else if (e->shape != shape) {
      if (any_mismatch) mismatched << "; ";
      mismatched << "layer '" << name << "' is " << to_string(e->shape) << " in archive but "
                 << to_string(shape) << " in spec";
      any_mismatch = true;
    }
  }
  if (!missing.empty()) {
    std::string list;
    for (const std::string& m : missing) list += (list.empty() ? "" : ", ") + m;
    throw SpecError("archive is missing layers: " + list);
  }
  if (any_mismatch) throw SpecError("archive shape mismatch: " + mismatched.str());
}

}  // namespace

Model load_model(const WeightArchive& archive, const ModelSpec& spec) {
  spec.validate();
  check_entries(archive, spec, true);
  std::vector<Parameter> params;
  for (const auto& [name, shape] : parameter_shapes(spec)) params.push_back({name, archive.tensor(name)});
  return Model(spec, std::move(params));
}

Model load_with_new_head(const WeightArchive& archive, const ModelSpec& spec, std::uint64_t seed) {
  spec.validate();
  check_entries(archive, spec, false);
  std::vector<Parameter> params;
  for (const auto& [name, shape] : parameter_shapes(spec)) {
    if (name == spec.head.name + ".weight") {
      params.push_back({name, kaiming_init(shape, layer_seed(seed, spec.head.name))});
    } else if (name == spec.head.name + ".bias") {
      params.push_back({name, Tensor(shape)});
    } else {
      params.push_back({name, archive.tensor(name)});
    }
  }
  return Model(spec, std::move(params));
}

}  // namespace lesion
