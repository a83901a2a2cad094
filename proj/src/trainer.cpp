#include "lesion/trainer.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <numeric>
#include <thread>

#include <json.hpp>

#include "lesion/adam.hpp"
#include "lesion/error.hpp"
#include "lesion/ops.hpp"
#include "lesion/rng.hpp"
#include "lesion/transfer.hpp"

namespace lesion {

void TrainConfig::validate() const {
  if (!(learning_rate > 0.0)) throw ConfigError("learning_rate must be positive");
  if (batch_size == 0) throw ConfigError("batch_size must be >= 1");
  if (max_epochs == 0) throw ConfigError("max_epochs must be >= 1");
  if (early_stop_patience == 0 || lr_patience == 0) throw ConfigError("patience values must be >= 1");
  if (!(lr_decay_factor > 0.0 && lr_decay_factor <= 1.0)) throw ConfigError("lr_decay_factor must lie in (0, 1]");
}

std::string epoch_record_to_json(const EpochRecord& r) {
  nlohmann::ordered_json j;
  j["epoch"] = r.epoch;
  j["train_loss"] = r.train_loss;
  j["valid_loss"] = r.valid_loss;
  j["valid_auroc"] = r.valid_auroc;
  j["lr"] = r.learning_rate;
  return j.dump();
}

double mean_loss(const Model& model, std::span<const Sample> samples) {
  if (samples.empty()) throw ContractError("mean_loss over an empty set");
  double total = 0.0;
  for (const Sample& s : samples) {
    Tape tape;
    const BoundParameters params = bind(model, tape, false);
    Var logit = forward(model, params, tape.leaf(s.image), tape.leaf(static_tensor(s)), false, nullptr);
    total += bce_with_logits(logit, s.label).value().item();
  }
  return total / static_cast<double>(samples.size());
}

MetricsReport evaluate_model(const Model& model, std::span<const Sample> test, double threshold) {
  const std::vector<double> scores = predict_proba(model, test);
  std::vector<int> labels;
  labels.reserve(test.size());
  for (const Sample& s : test) labels.push_back(s.label);
  return evaluate_scores(scores, labels, threshold);
}

namespace {

void require_both_classes(std::span<const Sample> samples, const char* what) {
  bool pos = false, neg = false;
  for (const Sample& s : samples) (s.label ? pos : neg) = true;
  if (!pos || !neg) throw MetricError(std::string(what) + " set must contain both classes");
}

std::vector<bool> frozen_mask(const Model& model, const std::set<std::string>& frozen_layers) {
  std::vector<bool> mask;
  for (const Parameter& p : model.parameters()) {
    const std::string layer = p.name.substr(0, p.name.rfind('.'));
    mask.push_back(frozen_layers.count(layer) > 0);
  }
  return mask;
}

}  // namespace

RunResult fit(Model& model, std::span<const Sample> train, std::span<const Sample> valid,
              const TrainConfig& config, const std::optional<AugmentationPolicy>& augmentation,
              const EpochCallback& on_epoch) {
  config.validate();
  if (train.empty()) throw ContractError("training set is empty");
  if (valid.empty()) throw ContractError("validation set is empty");
  require_both_classes(valid, "validation");
  if (augmentation) augmentation->validate();
  for (const std::string& layer : config.frozen_layers) {
    if (!model.parameter_index(layer + ".weight")) throw ConfigError("cannot freeze unknown layer '" + layer + "'");
  }

  const std::vector<bool> frozen = frozen_mask(model, config.frozen_layers);
  TrainingSchedule schedule(config.learning_rate, config.max_epochs, config.early_stop_patience,
                            config.lr_decay_factor, config.lr_patience, config.monitor);
  AdamState adam;
  Rng dropout_rng(derive_seed({config.seed, 0xd50ULL}));
  std::vector<int> valid_labels;
  for (const Sample& s : valid) valid_labels.push_back(s.label);

  RunResult result;
  std::vector<std::size_t> order(train.size());
  std::iota(order.begin(), order.end(), 0);

  for (std::size_t epoch = 1;; ++epoch) {
    Rng shuffle(derive_seed({config.seed, 0x5a4fULL, epoch}));
    for (std::size_t i = order.size() - 1; i > 0; --i) std::swap(order[i], order[shuffle.below(i + 1)]);

    const double lr = schedule.learning_rate();
    double loss_sum = 0.0;
    for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
      const std::size_t end = std::min(start + config.batch_size, order.size());
      Tape tape;
      BoundParameters params;
      for (std::size_t i = 0; i < model.parameters().size(); ++i) {
        params.vars.push_back(tape.leaf(model.parameters()[i].value, !frozen[i]));
      }
      std::vector<Var> losses;
      for (std::size_t b = start; b < end; ++b) {
        const Sample& raw = train[order[b]];
        Sample aug;
        const Sample* s = &raw;
        if (augmentation) {
          aug = augment(raw, *augmentation, epoch);
          s = &aug;
        }
        Var logit = forward(model, params, tape.leaf(s->image), tape.leaf(static_tensor(*s)), true, &dropout_rng);
        losses.push_back(bce_with_logits(logit, s->label));
      }
      Var loss = mean_of(losses);
      loss_sum += loss.value().item() * static_cast<double>(end - start);
      tape.backward(loss);
      std::vector<Tensor> grads;
      grads.reserve(params.vars.size());
      for (Var v : params.vars) grads.push_back(tape.grad(v));
      adam_step(model.parameters(), grads, adam, lr, frozen);
    }

    EpochRecord record;
    record.epoch = epoch;
    record.train_loss = loss_sum / static_cast<double>(train.size());
    double valid_loss = 0.0;
    std::vector<double> valid_scores;
    valid_scores.reserve(valid.size());
    for (const Sample& s : valid) {
      const double z = forward(model, s.image, static_tensor(s), false).item();
      valid_loss += std::max(z, 0.0) - z * s.label + std::log1p(std::exp(-std::abs(z)));
      valid_scores.push_back(stable_sigmoid(z));
    }
    record.valid_loss = valid_loss / static_cast<double>(valid.size());
    record.valid_auroc = auroc(valid_scores, valid_labels);
    record.learning_rate = lr;
    result.epoch_log.push_back(record);
    if (on_epoch) on_epoch(record);

    const auto decision = schedule.observe(config.monitor == Monitor::valid_loss ? record.valid_loss
                                                                                 : record.valid_auroc);
    if (decision.improved) result.best_weights = to_archive(model);
    if (decision.stop) {
      result.stopped_epoch = epoch;
      break;
    }
  }
  result.best_epoch = schedule.best_epoch();
  if (result.best_epoch == 0) {
    // No epoch ever improved (e.g. NaN metrics): keep the final weights.
    result.best_weights = to_archive(model);
    result.best_epoch = result.stopped_epoch;
  }
  model = load_model(result.best_weights, model.spec());
  return result;
}

std::vector<RunOutcome> multi_run(const ModelSpec& spec, std::span<const Sample> train,
                                  std::span<const Sample> valid, std::span<const Sample> test,
                                  const TrainConfig& config, const MultiRunOptions& options,
                                  const std::function<void(std::size_t, const EpochRecord&)>& on_epoch) {
  if (options.n_runs < 2) throw ConfigError("multi_run needs n_runs >= 2");
  std::vector<RunOutcome> outcomes(options.n_runs);
  std::atomic<std::size_t> next{0};
  std::mutex callback_mutex;

  auto worker = [&]() {
    for (std::size_t i = next++; i < options.n_runs; i = next++) {
      RunOutcome& out = outcomes[i];
      out.run_index = i;
      out.seed = config.seed + i;
      try {
        TrainConfig run_config = config;
        run_config.seed = out.seed;
        std::optional<AugmentationPolicy> policy = options.augmentation;
        if (policy) policy->seed = out.seed;
        Model model = options.transfer ? load_with_new_head(*options.transfer, spec, out.seed)
                                       : build(spec, out.seed);
        EpochCallback cb;
        if (on_epoch) {
          cb = [&, i](const EpochRecord& r) {
            std::lock_guard<std::mutex> lock(callback_mutex);
            on_epoch(i, r);
          };
        }
        RunResult result = fit(model, train, valid, run_config, policy, cb);
        out.report = evaluate_model(model, test, options.threshold);
        out.result = std::move(result);
      } catch (const std::exception& e) {
        out.error = e.what();
        out.result.reset();
        out.report.reset();
      }
    }
  };

  const std::size_t n_workers = std::clamp<std::size_t>(options.workers, 1, options.n_runs);
  if (n_workers == 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    for (std::size_t w = 0; w < n_workers; ++w) threads.emplace_back(worker);
    for (std::thread& t : threads) t.join();
  }
  return outcomes;
}

}  // namespace lesion
