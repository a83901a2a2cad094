#include "lesion/hyperopt.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <set>
#include <thread>

#include <json.hpp>

#include "lesion/error.hpp"
#include "lesion/rng.hpp"

namespace lesion {

const char* to_string(Scale scale) {
  switch (scale) {
    case Scale::linear: return "linear";
    case Scale::log2: return "log2";
    case Scale::log10: return "log10";
  }
  return "?";
}

void SearchSpace::validate() const {
  if (entries.empty()) throw ConfigError("search space is empty");
  std::set<std::string> names;
  for (const SearchEntry& e : entries) {
    if (!names.insert(e.name).second) throw ConfigError("duplicate search entry '" + e.name + "'");
    if (!(e.lower < e.upper)) throw ConfigError("search entry '" + e.name + "' needs lower < upper");
    if (e.scale != Scale::linear && !(e.lower > 0.0)) {
      throw ConfigError("log-scale entry '" + e.name + "' needs a positive lower bound");
    }
  }
}

SearchSpace SearchSpace::standard_cnn() {
  return {{
      {"dropout", 0.0, 0.5, Scale::linear, false},
      {"batch_size", 4, 512, Scale::log2, true},
      {"kernel_size", 2, 5, Scale::linear, true},
      {"learning_rate", 0.001, 0.01, Scale::log10, false},
      {"num_layers", 5, 10, Scale::linear, true},
      {"pool_size", 3, 4, Scale::linear, true},
      {"conv_filters", 6, 12, Scale::linear, true},
  }};
}

double draw(const SearchEntry& e, double u) {
  double v = 0.0;
  switch (e.scale) {
    case Scale::linear: v = e.lower + u * (e.upper - e.lower); break;
    case Scale::log2: {
      const double lo = std::log2(e.lower), hi = std::log2(e.upper);
      v = std::exp2(lo + u * (hi - lo));
      break;
    }
    case Scale::log10: {
      const double lo = std::log10(e.lower), hi = std::log10(e.upper);
      v = std::pow(10.0, lo + u * (hi - lo));
      break;
    }
  }
  v = std::clamp(v, e.lower, e.upper);
  if (!e.integer) return v;
  if (e.scale == Scale::log2) {
    double p = std::exp2(std::round(std::log2(v)));
    if (p < e.lower) p *= 2.0;
    if (p > e.upper) p /= 2.0;
    return p;
  }
  return std::round(v);
}

double Configuration::at(std::string_view name) const {
  for (const auto& [k, v] : values) {
    if (k == name) return v;
  }
  throw ConfigError("configuration has no entry '" + std::string(name) + "'");
}

Configuration sample(const SearchSpace& space, std::uint64_t seed, std::size_t trial_index) {
  space.validate();
  Rng rng(derive_seed({seed, static_cast<std::uint64_t>(trial_index), 0x7e57ULL}));
  Configuration c;
  for (const SearchEntry& e : space.entries) c.values.emplace_back(e.name, draw(e, rng.uniform()));
  return c;
}

std::string trial_to_json(const Trial& t) {
  nlohmann::ordered_json j;
  j["trial"] = t.index;
  nlohmann::ordered_json cfg;
  for (const auto& [k, v] : t.config.values) cfg[k] = v;
  j["config"] = cfg;
  if (t.objective) {
    j["objective"] = *t.objective;
    j["status"] = "ok";
  } else {
    j["objective"] = nullptr;
    j["status"] = "failed";
    j["error"] = t.error;
  }
  return j.dump();
}

std::vector<Trial> search(const SearchSpace& space, std::size_t budget, const Objective& objective,
                          const SearchOptions& options) {
  space.validate();
  if (budget == 0) throw ConfigError("search budget must be >= 1");
  std::vector<Trial> trials(budget);
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t i = next++; i < budget; i = next++) {
      Trial& t = trials[i];
      t.index = i;
      t.config = sample(space, options.seed, i);
      try {
        const double value = objective(t.config);
        if (std::isnan(value)) throw TrainingError("objective returned NaN");
        t.objective = value;
      } catch (const std::exception& e) {
        t.error = e.what();
      }
    }
  };
  const std::size_t n_workers = std::clamp<std::size_t>(options.workers, 1, budget);
  if (n_workers == 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    for (std::size_t w = 0; w < n_workers; ++w) threads.emplace_back(worker);
    for (std::thread& th : threads) th.join();
  }

  if (options.trial_log) {
    std::ofstream log(*options.trial_log, std::ios::binary | std::ios::app);
    if (!log) throw IoError("cannot open trial log '" + options.trial_log->string() + "'");
    for (const Trial& t : trials) log << trial_to_json(t) << '\n';
  }

  std::vector<Trial> ranked = trials;
  std::stable_sort(ranked.begin(), ranked.end(), [](const Trial& a, const Trial& b) {
    if (a.objective.has_value() != b.objective.has_value()) return a.objective.has_value();
    if (!a.objective) return false;
    return *a.objective > *b.objective;
  });
  return ranked;
}

StandardCnnConfig cnn_config_from(const Configuration& config) {
  StandardCnnConfig c;
  c.dropout = config.at("dropout");
  c.kernel_size = static_cast<std::size_t>(config.at("kernel_size"));
  c.num_conv_layers = static_cast<std::size_t>(config.at("num_layers"));
  c.pool_size = static_cast<std::size_t>(config.at("pool_size"));
  c.filters_per_layer = static_cast<std::size_t>(config.at("conv_filters"));
  return c;
}

TrainConfig train_config_from(const Configuration& config, TrainConfig base) {
  base.learning_rate = config.at("learning_rate");
  base.batch_size = static_cast<std::size_t>(config.at("batch_size"));
  return base;
}

}  // namespace lesion
