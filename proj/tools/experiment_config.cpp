#include "experiment_config.hpp"

#include <charconv>
#include <cstdio>
#include <functional>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "lesion/error.hpp"
#include "lesion/schedule.hpp"

namespace lesion::cli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
  double out = 0.0;
  const char* end = v.data() + v.size();
  const auto [p, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || p != end) throw ConfigError("config key '" + key + "' expects a number, got '" + v + "'");
  return out;
}

std::uint64_t to_u64(const std::string& key, const std::string& v) {
  std::uint64_t out = 0;
  const char* end = v.data() + v.size();
  const auto [p, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || p != end) {
    throw ConfigError("config key '" + key + "' expects a non-negative integer, got '" + v + "'");
  }
  return out;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError("config key '" + key + "' expects true or false, got '" + v + "'");
}

SynthDomain to_domain(const std::string& v) {
  if (v == "target") return SynthDomain::target;
  if (v == "source") return SynthDomain::source;
  throw ConfigError("synth_domain must be 'target' or 'source', got '" + v + "'");
}

std::set<std::string> to_name_set(const std::string& v) {
  std::set<std::string> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.insert(item);
  }
  return out;
}

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

using Setter = std::function<void(ExperimentConfig&, const std::string& key, const std::string& value)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"data.dir", [](auto& c, auto&, auto& v) { c.data_dir = v; }},
      {"data.height", [](auto& c, auto& k, auto& v) { c.height = to_u64(k, v); }},
      {"data.width", [](auto& c, auto& k, auto& v) { c.width = to_u64(k, v); }},
      {"data.synth_n", [](auto& c, auto& k, auto& v) { c.synth_n = to_u64(k, v); }},
      {"data.synth_positive_fraction", [](auto& c, auto& k, auto& v) { c.synth_positive_fraction = to_double(k, v); }},
      {"data.synth_domain", [](auto& c, auto&, auto& v) { c.synth_domain = to_domain(v); }},
      {"data.synth_seed", [](auto& c, auto& k, auto& v) { c.synth_seed = to_u64(k, v); }},
      {"model.spec", [](auto& c, auto&, auto& v) { c.model_spec = v; }},
      {"model.num_conv_layers", [](auto& c, auto& k, auto& v) { c.cnn.num_conv_layers = to_u64(k, v); }},
      {"model.kernel_size", [](auto& c, auto& k, auto& v) { c.cnn.kernel_size = to_u64(k, v); }},
      {"model.pool_size", [](auto& c, auto& k, auto& v) { c.cnn.pool_size = to_u64(k, v); }},
      {"model.filters_per_layer", [](auto& c, auto& k, auto& v) { c.cnn.filters_per_layer = to_u64(k, v); }},
      {"model.dropout", [](auto& c, auto& k, auto& v) { c.cnn.dropout = to_double(k, v); }},
      {"train.learning_rate", [](auto& c, auto& k, auto& v) { c.train.learning_rate = to_double(k, v); }},
      {"train.batch_size", [](auto& c, auto& k, auto& v) { c.train.batch_size = to_u64(k, v); }},
      {"train.max_epochs", [](auto& c, auto& k, auto& v) { c.train.max_epochs = to_u64(k, v); }},
      {"train.early_stop_patience", [](auto& c, auto& k, auto& v) { c.train.early_stop_patience = to_u64(k, v); }},
      {"train.lr_decay_factor", [](auto& c, auto& k, auto& v) { c.train.lr_decay_factor = to_double(k, v); }},
      {"train.lr_patience", [](auto& c, auto& k, auto& v) { c.train.lr_patience = to_u64(k, v); }},
      {"train.monitor", [](auto& c, auto&, auto& v) { c.train.monitor = parse_monitor(v); }},
      {"train.freeze", [](auto& c, auto&, auto& v) { c.train.frozen_layers = to_name_set(v); }},
      {"augment.enabled", [](auto& c, auto& k, auto& v) { c.augment = to_bool(k, v); }},
      {"augment.rotation_max_deg", [](auto& c, auto& k, auto& v) { c.augmentation.rotation_max_deg = to_double(k, v); }},
      {"augment.horizontal_flip_p", [](auto& c, auto& k, auto& v) { c.augmentation.horizontal_flip_p = to_double(k, v); }},
      {"augment.vertical_flip_p", [](auto& c, auto& k, auto& v) { c.augmentation.vertical_flip_p = to_double(k, v); }},
      {"augment.resize_scale_min", [](auto& c, auto& k, auto& v) { c.augmentation.resize_scale_min = to_double(k, v); }},
      {"augment.resize_scale_max", [](auto& c, auto& k, auto& v) { c.augmentation.resize_scale_max = to_double(k, v); }},
      {"augment.brightness_delta_max", [](auto& c, auto& k, auto& v) { c.augmentation.brightness_delta_max = to_double(k, v); }},
      {"augment.saturation_delta_max", [](auto& c, auto& k, auto& v) { c.augmentation.saturation_delta_max = to_double(k, v); }},
      {"run.seed", [](auto& c, auto& k, auto& v) { c.seed = to_u64(k, v); }},
      {"run.n_runs", [](auto& c, auto& k, auto& v) { c.n_runs = to_u64(k, v); }},
      {"run.workers", [](auto& c, auto& k, auto& v) { c.workers = to_u64(k, v); }},
      {"run.threshold", [](auto& c, auto& k, auto& v) { c.threshold = to_double(k, v); }},
      {"run.from_archive", [](auto& c, auto&, auto& v) { c.from_archive = v; }},
      {"run.out", [](auto& c, auto&, auto& v) { c.out = v; }},
      {"search.budget", [](auto& c, auto& k, auto& v) { c.search_budget = to_u64(k, v); }},
      {"search.max_epochs", [](auto& c, auto& k, auto& v) { c.search_max_epochs = to_u64(k, v); }},
  };
  return table;
}

}  // namespace

void ExperimentConfig::validate() const {
  if (!seed) throw ConfigError("a seed is required (--seed or [run] seed)");
  if (data_dir && !std::filesystem::is_directory(*data_dir)) {
    throw ConfigError("data directory '" + data_dir->string() + "' does not exist");
  }
  if (model_spec && !std::filesystem::is_regular_file(*model_spec)) {
    throw ConfigError("model spec '" + model_spec->string() + "' does not exist");
  }
  if (from_archive && !std::filesystem::is_regular_file(*from_archive)) {
    throw ConfigError("archive '" + from_archive->string() + "' does not exist");
  }
  if (height < 8 || width < 8) throw ConfigError("image height and width must be >= 8");
  if (!data_dir) {
    if (synth_n < 10) throw ConfigError("synth_n must be >= 10");
    if (!(synth_positive_fraction > 0.0 && synth_positive_fraction < 1.0)) {
      throw ConfigError("synth_positive_fraction must lie in (0, 1)");
    }
  }
  if (!model_spec) cnn.validate();
  train.validate();
  if (augment) augmentation.validate();
  if (workers < 1) throw ConfigError("workers must be >= 1");
  if (!(threshold >= 0.0 && threshold <= 1.0)) throw ConfigError("threshold must lie in [0, 1]");
  if (search_budget < 1) throw ConfigError("search budget must be >= 1");
  if (search_max_epochs < 1) throw ConfigError("search max_epochs must be >= 1");
}

ExperimentConfig parse_experiment_config(const std::string& text) {
  boost::property_tree::ptree tree;
  std::istringstream in(text);
  try {
    boost::property_tree::ini_parser::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError("malformed config: " + std::string(e.what()));
  }
  ExperimentConfig config;
  const auto& table = setters();
  for (const auto& [section, body] : tree) {
    if (body.empty()) throw ConfigError("config key '" + section + "' is outside any section");
    for (const auto& [key, node] : body) {
      const std::string full = section + "." + key;
      const auto it = table.find(full);
      if (it == table.end()) throw ConfigError("unknown config key '" + full + "'");
      it->second(config, full, trim(node.get_value<std::string>()));
    }
  }
  return config;
}

ExperimentConfig read_experiment_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_experiment_config(ss.str());
}

std::string experiment_config_to_ini(const ExperimentConfig& c) {
  std::ostringstream o;
  o << "[data]\n";
  if (c.data_dir) o << "dir = " << c.data_dir->string() << "\n";
  o << "height = " << c.height << "\n";
  o << "width = " << c.width << "\n";
  o << "synth_n = " << c.synth_n << "\n";
  o << "synth_positive_fraction = " << num(c.synth_positive_fraction) << "\n";
  o << "synth_domain = " << (c.synth_domain == SynthDomain::source ? "source" : "target") << "\n";
  if (c.synth_seed) o << "synth_seed = " << *c.synth_seed << "\n";
  o << "\n[model]\n";
  if (c.model_spec) o << "spec = " << c.model_spec->string() << "\n";
  o << "num_conv_layers = " << c.cnn.num_conv_layers << "\n";
  o << "kernel_size = " << c.cnn.kernel_size << "\n";
  o << "pool_size = " << c.cnn.pool_size << "\n";
  o << "filters_per_layer = " << c.cnn.filters_per_layer << "\n";
  o << "dropout = " << num(c.cnn.dropout) << "\n";
  o << "\n[train]\n";
  o << "learning_rate = " << num(c.train.learning_rate) << "\n";
  o << "batch_size = " << c.train.batch_size << "\n";
  o << "max_epochs = " << c.train.max_epochs << "\n";
  o << "early_stop_patience = " << c.train.early_stop_patience << "\n";
  o << "lr_decay_factor = " << num(c.train.lr_decay_factor) << "\n";
  o << "lr_patience = " << c.train.lr_patience << "\n";
  o << "monitor = " << to_string(c.train.monitor) << "\n";
  std::string freeze;
  for (const std::string& name : c.train.frozen_layers) freeze += (freeze.empty() ? "" : ",") + name;
  o << "freeze = " << freeze << "\n";
  o << "\n[augment]\n";
  o << "enabled = " << (c.augment ? "true" : "false") << "\n";
  o << "rotation_max_deg = " << num(c.augmentation.rotation_max_deg) << "\n";
  o << "horizontal_flip_p = " << num(c.augmentation.horizontal_flip_p) << "\n";
  o << "vertical_flip_p = " << num(c.augmentation.vertical_flip_p) << "\n";
  o << "resize_scale_min = " << num(c.augmentation.resize_scale_min) << "\n";
  o << "resize_scale_max = " << num(c.augmentation.resize_scale_max) << "\n";
  o << "brightness_delta_max = " << num(c.augmentation.brightness_delta_max) << "\n";
  o << "saturation_delta_max = " << num(c.augmentation.saturation_delta_max) << "\n";
  o << "\n[run]\n";
  if (c.seed) o << "seed = " << *c.seed << "\n";
  o << "n_runs = " << c.n_runs << "\n";
  o << "workers = " << c.workers << "\n";
  o << "threshold = " << num(c.threshold) << "\n";
  if (c.from_archive) o << "from_archive = " << c.from_archive->string() << "\n";
  if (c.out) o << "out = " << c.out->string() << "\n";
  o << "\n[search]\n";
  o << "budget = " << c.search_budget << "\n";
  o << "max_epochs = " << c.search_max_epochs << "\n";
  return o.str();
}

}  // namespace lesion::cli
