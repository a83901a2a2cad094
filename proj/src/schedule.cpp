#include "lesion/schedule.hpp"

#include <limits>

#include "lesion/error.hpp"

namespace lesion {

Monitor parse_monitor(const std::string& text) {
  if (text == "valid_loss") return Monitor::valid_loss;
  if (text == "valid_auroc") return Monitor::valid_auroc;
  throw ConfigError("unknown monitor '" + text + "' (expected valid_loss or valid_auroc)");
}

const char* to_string(Monitor m) { return m == Monitor::valid_loss ? "valid_loss" : "valid_auroc"; }

TrainingSchedule::TrainingSchedule(double learning_rate, std::size_t max_epochs,
                                   std::size_t early_stop_patience, double decay_factor,
                                   std::size_t lr_patience, Monitor monitor)
    : learning_rate_(learning_rate),
      max_epochs_(max_epochs),
      early_stop_patience_(early_stop_patience),
      decay_factor_(decay_factor),
      lr_patience_(lr_patience),
      monitor_(monitor),
      best_(monitor == Monitor::valid_loss ? std::numeric_limits<double>::infinity()
                                           : -std::numeric_limits<double>::infinity()) {
  if (!(learning_rate > 0.0)) throw ConfigError("learning rate must be positive");
  if (max_epochs == 0) throw ConfigError("max_epochs must be >= 1");
  if (early_stop_patience == 0 || lr_patience == 0) throw ConfigError("patience values must be >= 1");
  if (!(decay_factor > 0.0 && decay_factor <= 1.0)) throw ConfigError("lr decay factor must lie in (0, 1]");
}

TrainingSchedule::Decision TrainingSchedule::observe(double value) {
  ++epoch_;
  Decision d;
  d.improved = monitor_ == Monitor::valid_loss ? value < best_ - kMinImprovement
                                               : value > best_ + kMinImprovement;
  if (d.improved) {
    best_ = value;
    best_epoch_ = epoch_;
    bad_epochs_ = 0;
    lr_bad_epochs_ = 0;
  } else {
    ++bad_epochs_;
    if (++lr_bad_epochs_ >= lr_patience_) {
      learning_rate_ *= decay_factor_;
      lr_bad_epochs_ = 0;
    }
  }
  d.stop = bad_epochs_ >= early_stop_patience_ || epoch_ >= max_epochs_;
  d.next_learning_rate = learning_rate_;
  return d;
}

}  // namespace lesion
