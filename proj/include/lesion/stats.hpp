#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "lesion/metrics.hpp"

namespace lesion {

double mean(std::span<const double> values);
// Sample standard deviation (n - 1 denominator).
double sample_std(std::span<const double> values);

// Student-t quantile and upper-tail probability.
double t_quantile(double probability, double degrees_freedom);
double t_upper_tail(double t, double degrees_freedom);

struct MeanCi {
  double mean = 0.0;
  double half_width_95 = 0.0;
  friend bool operator==(const MeanCi&, const MeanCi&) = default;
};

// mean +- t_{0.975, n-1} * s / sqrt(n). Needs n >= 2.
MeanCi mean_ci95(std::span<const double> values);

struct AggregateReport {
  MeanCi accuracy;
  MeanCi auroc;
  MeanCi auprc;
  MeanCi f1;
  std::size_t n_runs = 0;
  friend bool operator==(const AggregateReport&, const AggregateReport&) = default;
};

AggregateReport aggregate(std::span<const MetricsReport> reports);

enum class Favored { a, b, neither };
const char* to_string(Favored f);

struct SignificanceResult {
  double t_statistic = 0.0;
  double degrees_freedom = 0.0;
  double p_one_tailed = 0.5;  // H1: mean(b) > mean(a)
  Favored direction = Favored::neither;
};

// Welch's unequal-variance t-test with Welch-Satterthwaite degrees of
// freedom. If both samples have zero variance the result is t = 0, p = 0.5
// for equal means and p = 0 or 1 otherwise.
SignificanceResult welch_t_test(std::span<const double> a, std::span<const double> b);

// Paired t-test on b[i] - a[i], for seed-matched runs.
SignificanceResult paired_t_test(std::span<const double> a, std::span<const double> b);

// "**" for p < 0.001, "*" for p < 0.05, "" otherwise.
std::string significance_stars(double p);

// Per-run values of one named metric ("accuracy", "auroc", "auprc", "f1").
std::vector<double> metric_values(std::span<const MetricsReport> reports, const std::string& metric);

}  // namespace lesion
