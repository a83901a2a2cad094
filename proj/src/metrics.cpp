#include "lesion/metrics.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "lesion/error.hpp"

namespace lesion {

namespace {

struct Counts {
  std::size_t positives = 0;
  std::size_t negatives = 0;
};

Counts check_inputs(std::span<const double> scores, std::span<const int> labels) {
  if (scores.size() != labels.size()) {
    throw MetricError("scores and labels differ in length (" + std::to_string(scores.size()) +
                      " vs " + std::to_string(labels.size()) + ")");
  }
  Counts c;
  for (int y : labels) {
    if (y == 1) {
      ++c.positives;
    } else if (y == 0) {
      ++c.negatives;
    } else {
      throw MetricError("labels must be 0 or 1");
    }
  }
  return c;
}

// Cumulative (tp, fp) after each group of tied scores, highest first.
std::vector<std::pair<std::size_t, std::size_t>> sweep(std::span<const double> scores,
                                                       std::span<const int> labels) {
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  std::vector<std::pair<std::size_t, std::size_t>> out;
  std::size_t tp = 0, fp = 0;
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (labels[order[i]] == 1) ++tp; else ++fp;
    if (i + 1 == order.size() || scores[order[i + 1]] != scores[order[i]]) out.emplace_back(tp, fp);
  }
  return out;
}

}  // namespace

std::vector<CurvePoint> roc_points(std::span<const double> scores, std::span<const int> labels) {
  const Counts c = check_inputs(scores, labels);
  if (c.positives == 0 || c.negatives == 0) throw MetricError("ROC needs both classes present");
  const double p = static_cast<double>(c.positives), n = static_cast<double>(c.negatives);
  std::vector<CurvePoint> all{{0.0, 0.0}};
  for (auto [tp, fp] : sweep(scores, labels)) all.push_back({fp / n, tp / p});
  std::vector<CurvePoint> out;
  for (std::size_t i = 0; i < all.size(); ++i) {
    if (i > 0 && i + 1 < all.size()) {
      const CurvePoint& a = all[i - 1];
      const CurvePoint& b = all[i + 1];
      if ((a.x == all[i].x && b.x == all[i].x) || (a.y == all[i].y && b.y == all[i].y)) continue;
    }
    out.push_back(all[i]);
  }
  return out;
}

std::vector<CurvePoint> pr_points(std::span<const double> scores, std::span<const int> labels) {
  const Counts c = check_inputs(scores, labels);
  if (c.positives == 0) throw MetricError("precision-recall needs at least one positive");
  const double p = static_cast<double>(c.positives);
  std::vector<CurvePoint> out{{0.0, 1.0}};
  for (auto [tp, fp] : sweep(scores, labels)) {
    out.push_back({tp / p, static_cast<double>(tp) / static_cast<double>(tp + fp)});
  }
  return out;
}

double trapezoid(std::span<const CurvePoint> points) {
  double area = 0.0;
  for (std::size_t i = 1; i < points.size(); ++i) {
    area += (points[i].x - points[i - 1].x) * (points[i].y + points[i - 1].y) / 2.0;
  }
  return area;
}

double auroc(std::span<const double> scores, std::span<const int> labels) {
  return trapezoid(roc_points(scores, labels));
}

double auprc(std::span<const double> scores, std::span<const int> labels) {
  const std::vector<CurvePoint> pts = pr_points(scores, labels);
  double area = 0.0;
  for (std::size_t i = 1; i < pts.size(); ++i) area += (pts[i].x - pts[i - 1].x) * pts[i].y;
  return area;
}

AccuracyF1 accuracy_f1(std::span<const double> scores, std::span<const int> labels, double threshold) {
  check_inputs(scores, labels);
  std::size_t tp = 0, fp = 0, fn = 0, tn = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const bool predicted = scores[i] >= threshold;
    if (predicted && labels[i] == 1) ++tp;
    else if (predicted) ++fp;
    else if (labels[i] == 1) ++fn;
    else ++tn;
  }
  AccuracyF1 out;
  if (!scores.empty()) out.accuracy = static_cast<double>(tp + tn) / static_cast<double>(scores.size());
  const std::size_t denom = 2 * tp + fp + fn;
  out.f1 = denom == 0 ? 0.0 : 2.0 * static_cast<double>(tp) / static_cast<double>(denom);
  return out;
}

double tpr_at_fpr(std::span<const CurvePoint> roc, double fpr) {
  if (roc.empty()) throw MetricError("empty ROC curve");
  // Last point at or left of fpr carries the highest TPR reachable there.
  std::size_t j = 0;
  while (j + 1 < roc.size() && roc[j + 1].x <= fpr) ++j;
  if (j + 1 == roc.size()) return roc[j].y;
  const CurvePoint& a = roc[j];
  const CurvePoint& b = roc[j + 1];
  return a.y + (b.y - a.y) * (fpr - a.x) / (b.x - a.x);
}

MetricsReport evaluate_scores(std::span<const double> scores, std::span<const int> labels, double threshold) {
  MetricsReport r;
  const AccuracyF1 af = accuracy_f1(scores, labels, threshold);
  r.accuracy = af.accuracy;
  r.f1 = af.f1;
  r.auroc = auroc(scores, labels);
  r.auprc = auprc(scores, labels);
  r.n_test = scores.size();
  r.threshold = threshold;
  return r;
}

}  // namespace lesion
