#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace lesion {

struct CurvePoint {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const CurvePoint&, const CurvePoint&) = default;
};

// ROC points (FPR, TPR) from a descending threshold sweep, one point per
// distinct score, starting at (0,0) and ending at (1,1). Interior points
// on axis-parallel runs are dropped; they do not change the area.
std::vector<CurvePoint> roc_points(std::span<const double> scores, std::span<const int> labels);

// Precision-recall points (recall, precision), starting at (0, 1).
std::vector<CurvePoint> pr_points(std::span<const double> scores, std::span<const int> labels);

// Trapezoidal area under roc_points(); equals the Mann-Whitney statistic
// with ties counted as one half.
double auroc(std::span<const double> scores, std::span<const int> labels);

// Average precision: sum over distinct thresholds of (R_k - R_{k-1}) * P_k.
double auprc(std::span<const double> scores, std::span<const int> labels);

struct AccuracyF1 {
  double accuracy = 0.0;
  double f1 = 0.0;
};

// Predictions are score >= threshold. F1 is 0 when TP = FP = FN = 0.
AccuracyF1 accuracy_f1(std::span<const double> scores, std::span<const int> labels,
                       double threshold = 0.5);

double trapezoid(std::span<const CurvePoint> points);

// TPR reached at the given false-positive rate, interpolating linearly
// between ROC points.
double tpr_at_fpr(std::span<const CurvePoint> roc, double fpr);

struct MetricsReport {
  double accuracy = 0.0;
  double auroc = 0.0;
  double auprc = 0.0;
  double f1 = 0.0;
  std::size_t n_test = 0;
  double threshold = 0.5;

  friend bool operator==(const MetricsReport&, const MetricsReport&) = default;
};

MetricsReport evaluate_scores(std::span<const double> scores, std::span<const int> labels,
                              double threshold = 0.5);

}  // namespace lesion
