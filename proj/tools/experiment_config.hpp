#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "lesion/augment.hpp"
#include "lesion/model.hpp"
#include "lesion/synth.hpp"
#include "lesion/trainer.hpp"

namespace lesion::cli {

// INI experiment file. Sections and keys:
//   [data]     dir, height, width, synth_n, synth_positive_fraction,
//              synth_domain (target|source), synth_seed
//   [model]    spec, num_conv_layers, kernel_size, pool_size,
//              filters_per_layer, dropout
//   [train]    learning_rate, batch_size, max_epochs, early_stop_patience,
//              lr_decay_factor, lr_patience, monitor (valid_loss|valid_auroc),
//              freeze (comma-separated layer names)
//   [augment]  enabled, rotation_max_deg, horizontal_flip_p, vertical_flip_p,
//              resize_scale_min, resize_scale_max, brightness_delta_max,
//              saturation_delta_max
//   [run]      seed, n_runs, workers, threshold, from_archive, out
//   [search]   budget, max_epochs
// Unknown sections or keys are rejected.
struct ExperimentConfig {
  std::optional<std::filesystem::path> data_dir;
  std::size_t height = 24;
  std::size_t width = 24;
  std::size_t synth_n = 600;
  double synth_positive_fraction = 0.5;
  SynthDomain synth_domain = SynthDomain::target;
  std::optional<std::uint64_t> synth_seed;

  std::optional<std::filesystem::path> model_spec;
  StandardCnnConfig cnn;

  TrainConfig train;

  bool augment = false;
  AugmentationPolicy augmentation;

  std::optional<std::uint64_t> seed;
  std::size_t n_runs = 10;
  std::size_t workers = 1;
  double threshold = 0.5;
  std::optional<std::filesystem::path> from_archive;
  std::optional<std::filesystem::path> out;

  std::size_t search_budget = 50;
  std::size_t search_max_epochs = 5;

  // Throws ConfigError for out-of-range values, a missing seed, or
  // referenced paths that do not exist.
  void validate() const;
};

ExperimentConfig read_experiment_config(const std::filesystem::path& path);
ExperimentConfig parse_experiment_config(const std::string& text);

// Full effective configuration in INI form, keys in a fixed order.
std::string experiment_config_to_ini(const ExperimentConfig& config);

}  // namespace lesion::cli
