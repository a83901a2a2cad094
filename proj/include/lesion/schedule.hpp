#pragma once

#include <cstddef>
#include <string>

namespace lesion {

enum class Monitor { valid_loss, valid_auroc };

Monitor parse_monitor(const std::string& text);
const char* to_string(Monitor m);

// Early stopping plus plateau step decay, both driven by one monitored
// validation value. A value counts as an improvement only when it beats the
// best so far by at least kMinImprovement.
class TrainingSchedule {
 public:
  static constexpr double kMinImprovement = 1e-6;

  struct Decision {
    bool improved = false;
    bool stop = false;
    double next_learning_rate = 0.0;
  };

  TrainingSchedule(double learning_rate, std::size_t max_epochs, std::size_t early_stop_patience,
                   double decay_factor, std::size_t lr_patience, Monitor monitor = Monitor::valid_loss);

  // Records the value measured at the end of the next epoch.
  Decision observe(double value);

  double learning_rate() const { return learning_rate_; }
  std::size_t epochs_seen() const { return epoch_; }
  std::size_t best_epoch() const { return best_epoch_; }  // 1-based, 0 before any epoch
  double best_value() const { return best_; }

 private:
  double learning_rate_;
  std::size_t max_epochs_;
  std::size_t early_stop_patience_;
  double decay_factor_;
  std::size_t lr_patience_;
  Monitor monitor_;
  double best_;
  std::size_t best_epoch_ = 0;
  std::size_t epoch_ = 0;
  std::size_t bad_epochs_ = 0;
  std::size_t lr_bad_epochs_ = 0;
};

}  // namespace lesion
