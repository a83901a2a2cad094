#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "lesion/archive.hpp"
#include "lesion/augment.hpp"
#include "lesion/metrics.hpp"
#include "lesion/model.hpp"
#include "lesion/sample.hpp"
#include "lesion/schedule.hpp"

namespace lesion {

struct TrainConfig {
  double learning_rate = 0.00977;
  std::size_t batch_size = 8;
  std::size_t max_epochs = 15;
  std::size_t early_stop_patience = 3;
  double lr_decay_factor = 0.4;
  std::size_t lr_patience = 1;
  std::uint64_t seed = 0;
  Monitor monitor = Monitor::valid_loss;
  // Layer names whose parameters stay fixed. Empty means full finetuning.
  std::set<std::string> frozen_layers;

  void validate() const;
};

struct EpochRecord {
  std::size_t epoch = 0;  // 1-based
  double train_loss = 0.0;
  double valid_loss = 0.0;
  double valid_auroc = 0.0;
  double learning_rate = 0.0;  // rate used during this epoch
};

std::string epoch_record_to_json(const EpochRecord& record);

struct RunResult {
  WeightArchive best_weights;
  std::vector<EpochRecord> epoch_log;
  std::size_t stopped_epoch = 0;
  std::size_t best_epoch = 0;
};

using EpochCallback = std::function<void(const EpochRecord&)>;

// Mean binary cross-entropy in eval mode.
double mean_loss(const Model& model, std::span<const Sample> samples);

// Trains model in place with Adam, seeded batch shuffles (last partial batch
// kept), early stopping and plateau LR decay. On return the model holds the
// best epoch's weights as stored in best_weights (float32-rounded).
RunResult fit(Model& model, std::span<const Sample> train, std::span<const Sample> valid,
              const TrainConfig& config, const std::optional<AugmentationPolicy>& augmentation,
              const EpochCallback& on_epoch = {});

MetricsReport evaluate_model(const Model& model, std::span<const Sample> test, double threshold = 0.5);

struct RunOutcome {
  std::size_t run_index = 0;
  std::uint64_t seed = 0;
  std::optional<RunResult> result;
  std::optional<MetricsReport> report;
  std::string error;  // set when the run failed

  bool ok() const { return result.has_value(); }
};

struct MultiRunOptions {
  std::size_t n_runs = 10;
  std::size_t workers = 1;
  // When set, every run starts from these weights with a fresh head.
  std::optional<WeightArchive> transfer;
  std::optional<AugmentationPolicy> augmentation;
  double threshold = 0.5;
};

// Independent runs; run i uses seed config.seed + i for initialisation,
// shuffling, dropout and augmentation. Outcomes are ordered by run index.
// A failing run is reported in its outcome and does not stop the others.
std::vector<RunOutcome> multi_run(const ModelSpec& spec, std::span<const Sample> train,
                                  std::span<const Sample> valid, std::span<const Sample> test,
                                  const TrainConfig& config, const MultiRunOptions& options,
                                  const std::function<void(std::size_t, const EpochRecord&)>& on_epoch = {});

}  // namespace lesion
