#include "lesion/stats.hpp"

#include <cmath>
#include <limits>

#include <boost/math/distributions/students_t.hpp>

#include "lesion/error.hpp"

namespace lesion {

double mean(std::span<const double> values) {
  if (values.empty()) throw MetricError("mean of an empty sample");
  // Shifted by the first value so a constant sample has exactly that mean.
  const double shift = values.front();
  double s = 0.0;
  for (double v : values) s += v - shift;
  return shift + s / static_cast<double>(values.size());
}

double sample_std(std::span<const double> values) {
  if (values.size() < 2) throw MetricError("sample standard deviation needs n >= 2");
  const double m = mean(values);
  double ss = 0.0;
  for (double v : values) ss += (v - m) * (v - m);
  return std::sqrt(ss / static_cast<double>(values.size() - 1));
}

double t_quantile(double probability, double degrees_freedom) {
  boost::math::students_t dist(degrees_freedom);
  return boost::math::quantile(dist, probability);
}

double t_upper_tail(double t, double degrees_freedom) {
  if (std::isinf(t)) return t > 0 ? 0.0 : 1.0;
  boost::math::students_t dist(degrees_freedom);
  return boost::math::cdf(boost::math::complement(dist, t));
}

MeanCi mean_ci95(std::span<const double> values) {
  if (values.size() < 2) {
    throw MetricError("confidence interval needs at least 2 runs, got " + std::to_string(values.size()));
  }
  const double n = static_cast<double>(values.size());
  return {mean(values), t_quantile(0.975, n - 1.0) * sample_std(values) / std::sqrt(n)};
}

std::vector<double> metric_values(std::span<const MetricsReport> reports, const std::string& metric) {
  std::vector<double> out;
  out.reserve(reports.size());
  for (const MetricsReport& r : reports) {
    if (metric == "accuracy") out.push_back(r.accuracy);
    else if (metric == "auroc") out.push_back(r.auroc);
    else if (metric == "auprc") out.push_back(r.auprc);
    else if (metric == "f1") out.push_back(r.f1);
    else throw MetricError("unknown metric '" + metric + "'");
  }
  return out;
}

AggregateReport aggregate(std::span<const MetricsReport> reports) {
  if (reports.size() < 2) {
    throw MetricError("aggregation needs at least 2 runs, got " + std::to_string(reports.size()));
  }
  AggregateReport out;
  out.accuracy = mean_ci95(metric_values(reports, "accuracy"));
  out.auroc = mean_ci95(metric_values(reports, "auroc"));
  out.auprc = mean_ci95(metric_values(reports, "auprc"));
  out.f1 = mean_ci95(metric_values(reports, "f1"));
  out.n_runs = reports.size();
  return out;
}

const char* to_string(Favored f) {
  switch (f) {
    case Favored::a: return "a";
    case Favored::b: return "b";
    case Favored::neither: return "neither";
  }
  return "?";
}

namespace {

SignificanceResult finish(double diff, double se, double df) {
  SignificanceResult r;
  r.degrees_freedom = df;
  if (se == 0.0) {
    // Degenerate: both samples constant.
    r.t_statistic = diff == 0.0 ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), diff);
    r.p_one_tailed = diff == 0.0 ? 0.5 : (diff > 0.0 ? 0.0 : 1.0);
  } else {
    r.t_statistic = diff / se;
    r.p_one_tailed = t_upper_tail(r.t_statistic, df);
  }
  r.direction = diff > 0.0 ? Favored::b : (diff < 0.0 ? Favored::a : Favored::neither);
  return r;
}

}  // namespace

SignificanceResult welch_t_test(std::span<const double> a, std::span<const double> b) {
  if (a.size() < 2 || b.size() < 2) throw MetricError("t-test needs at least 2 values per sample");
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  const double va = std::pow(sample_std(a), 2) / na;
  const double vb = std::pow(sample_std(b), 2) / nb;
  const double se = std::sqrt(va + vb);
  double df = na + nb - 2.0;
  if (se > 0.0) df = (va + vb) * (va + vb) / (va * va / (na - 1.0) + vb * vb / (nb - 1.0));
  return finish(mean(b) - mean(a), se, df);
}

SignificanceResult paired_t_test(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw MetricError("paired t-test needs equal sample sizes");
  if (a.size() < 2) throw MetricError("t-test needs at least 2 values per sample");
  std::vector<double> d(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) d[i] = b[i] - a[i];
  const double n = static_cast<double>(d.size());
  return finish(mean(d), sample_std(d) / std::sqrt(n), n - 1.0);
}

std::string significance_stars(double p) {
  if (p < 0.001) return "**";
  if (p < 0.05) return "*";
  return "";
}

}  // namespace lesion
