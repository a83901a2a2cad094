#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lesion/model.hpp"
#include "lesion/trainer.hpp"

namespace lesion {

enum class Scale { linear, log2, log10 };

const char* to_string(Scale scale);

struct SearchEntry {
  std::string name;
  double lower = 0.0;
  double upper = 1.0;
  Scale scale = Scale::linear;
  bool integer = false;
};

struct SearchSpace {
  std::vector<SearchEntry> entries;

  // Throws ConfigError: lower < upper, positive bounds on log scales,
  // unique names.
  void validate() const;

  // dropout, batch_size, kernel_size, learning_rate, num_layers, pool_size,
  // conv_filters with the standard CNN's ranges and scales.
  static SearchSpace standard_cnn();
};

// Maps u in [0, 1) to the entry's range, uniform on its scale. Integer
// entries are rounded; integer log2 entries are snapped to a power of two.
double draw(const SearchEntry& entry, double u);

struct Configuration {
  std::vector<std::pair<std::string, double>> values;

  double at(std::string_view name) const;
  friend bool operator==(const Configuration&, const Configuration&) = default;
};

// Deterministic in (seed, trial_index).
Configuration sample(const SearchSpace& space, std::uint64_t seed, std::size_t trial_index);

struct Trial {
  std::size_t index = 0;
  Configuration config;
  std::optional<double> objective;  // validation AUROC; unset on failure
  std::string error;
};

std::string trial_to_json(const Trial& trial);

using Objective = std::function<double(const Configuration&)>;

struct SearchOptions {
  std::uint64_t seed = 0;
  std::size_t workers = 1;
  // Appended one JSON line per trial, in trial order.
  std::optional<std::filesystem::path> trial_log;
};

// Runs budget independent trials and returns them sorted by objective,
// highest first; failed trials go last; ties keep trial order.
std::vector<Trial> search(const SearchSpace& space, std::size_t budget, const Objective& objective,
                          const SearchOptions& options = {});

StandardCnnConfig cnn_config_from(const Configuration& config);
TrainConfig train_config_from(const Configuration& config, TrainConfig base);

}  // namespace lesion
