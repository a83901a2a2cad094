#include "lesion/model_spec_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "lesion/error.hpp"

namespace lesion {

using nlohmann::ordered_json;

namespace {

ordered_json layer_to_json(const LayerDesc& l) {
  ordered_json j;
  j["name"] = l.name;
  j["type"] = to_string(l.kind);
  switch (l.kind) {
    case LayerKind::conv2d:
      j["in_channels"] = l.in_channels;
      j["out_channels"] = l.out_channels;
      j["kernel"] = l.kernel;
      j["stride"] = l.stride;
      j["padding"] = l.padding;
      break;
    case LayerKind::max_pool2d: j["window"] = l.window; break;
    case LayerKind::dropout: j["rate"] = l.rate; break;
    case LayerKind::linear:
      j["in_features"] = l.in_features;
      j["out_features"] = l.out_features;
      break;
    case LayerKind::relu:
    case LayerKind::flatten: break;
  }
  return j;
}

template <typename T>
T required(const ordered_json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) throw SpecError(where + ": missing key '" + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw SpecError(where + ": key '" + key + "' has the wrong type");
  }
}

LayerDesc layer_from_json(const ordered_json& j) {
  if (!j.is_object()) throw SpecError("layer entries must be objects");
  LayerDesc l;
  l.name = required<std::string>(j, "name", "layer");
  const std::string where = "layer '" + l.name + "'";
  l.kind = parse_layer_kind(required<std::string>(j, "type", where));
  switch (l.kind) {
    case LayerKind::conv2d:
      l.in_channels = required<std::size_t>(j, "in_channels", where);
      l.out_channels = required<std::size_t>(j, "out_channels", where);
      l.kernel = required<std::size_t>(j, "kernel", where);
      l.stride = j.value("stride", std::size_t{1});
      l.padding = j.value("padding", std::size_t{0});
      break;
    case LayerKind::max_pool2d: l.window = required<std::size_t>(j, "window", where); break;
    case LayerKind::dropout: l.rate = required<double>(j, "rate", where); break;
    case LayerKind::linear:
      l.in_features = required<std::size_t>(j, "in_features", where);
      l.out_features = required<std::size_t>(j, "out_features", where);
      break;
    case LayerKind::relu:
    case LayerKind::flatten: break;
  }
  return l;
}

}  // namespace

std::string model_spec_to_json(const ModelSpec& spec) {
  ordered_json j;
  j["input_shape"] = spec.input_shape;
  j["static_dim"] = spec.static_dim;
  j["image_branch"] = ordered_json::array();
  for (const LayerDesc& l : spec.image_branch) j["image_branch"].push_back(layer_to_json(l));
  j["static_branch"] = ordered_json::array();
  for (const LayerDesc& l : spec.static_branch) j["static_branch"].push_back(layer_to_json(l));
  j["head"] = layer_to_json(spec.head);
  return j.dump(2) + "\n";
}

ModelSpec model_spec_from_json(const std::string& text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw SpecError(std::string("model spec is not valid JSON: ") + e.what());
  }
  ModelSpec spec;
  spec.input_shape = required<std::array<std::size_t, 3>>(j, "input_shape", "model spec");
  spec.static_dim = j.value("static_dim", std::size_t{3});
  for (const auto& l : required<ordered_json>(j, "image_branch", "model spec")) {
    spec.image_branch.push_back(layer_from_json(l));
  }
  if (j.contains("static_branch")) {
    for (const auto& l : j.at("static_branch")) spec.static_branch.push_back(layer_from_json(l));
  }
  spec.head = layer_from_json(required<ordered_json>(j, "head", "model spec"));
  spec.validate();
  return spec;
}

void write_model_spec(const ModelSpec& spec, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write model spec '" + path.string() + "'");
  out << model_spec_to_json(spec);
}

ModelSpec read_model_spec(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read model spec '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return model_spec_from_json(buf.str());
}

}  // namespace lesion
