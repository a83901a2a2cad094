#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "ap_fixtures.hpp"
#include "lesion/error.hpp"
#include "lesion/metrics.hpp"
#include "lesion/report_io.hpp"
#include "lesion/rng.hpp"
#include "lesion/stats.hpp"
#include "oracles.hpp"

using namespace lesion;

namespace {

struct Instance {
  std::vector<double> scores;
  std::vector<int> labels;
};

// n in [2, 100] with both classes; ties drawn from a coarse grid when asked.
Instance random_instance(Rng& rng, bool ties) {
  Instance in;
  const std::size_t n = 2 + rng.below(99);
  for (std::size_t i = 0; i < n; ++i) {
    in.scores.push_back(ties ? static_cast<double>(rng.below(8)) / 7.0 : rng.uniform());
    in.labels.push_back(rng.bernoulli(0.4) ? 1 : 0);
  }
  in.labels[0] = 1;
  in.labels[1] = 0;
  return in;
}

// Enumerates each distinct threshold from the top, counts the confusion
// matrix from scratch, and accumulates (R_k - R_{k-1}) * P_k.
double brute_average_precision(const std::vector<double>& s, const std::vector<int>& y) {
  std::set<double, std::greater<>> thresholds(s.begin(), s.end());
  const double positives = static_cast<double>(std::count(y.begin(), y.end(), 1));
  double ap = 0.0, prev_recall = 0.0;
  for (double t : thresholds) {
    double tp = 0.0, predicted = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (s[i] >= t) {
        predicted += 1.0;
        if (y[i] == 1) tp += 1.0;
      }
    }
    const double recall = tp / positives;
    ap += (recall - prev_recall) * (tp / predicted);
    prev_recall = recall;
  }
  return ap;
}

MetricsReport report_with(double v) {
  MetricsReport r;
  r.accuracy = r.auroc = r.auprc = r.f1 = v;
  r.n_test = 10;
  return r;
}

// Frozen from scipy.stats.ttest_ind(b, a, equal_var=False, alternative='greater')
// and scipy.stats.ttest_rel(b, a, alternative='greater').
struct WelchFixture {
  std::vector<double> a, b;
  double t, p, df;
  double paired_t, paired_p;
};

const std::vector<WelchFixture>& welch_fixtures() {
  static const std::vector<WelchFixture> f = {
      {{0.90, 0.91, 0.89, 0.90, 0.92, 0.88, 0.90, 0.91, 0.89, 0.90},
       {0.93, 0.94, 0.92, 0.93, 0.95, 0.91, 0.93, 0.92, 0.94, 0.93},
       5.809475019311092, 8.343813626110131e-06, 18.0, 10.062305898749068, 1.6989308985706097e-06},
      {{0.90, 0.905, 0.895, 0.90, 0.901, 0.899, 0.902, 0.898, 0.90, 0.90},
       {0.903, 0.899, 0.905, 0.901, 0.897, 0.906, 0.902, 0.90, 0.904, 0.898},
       1.1920791213585835, 0.12454493407584911, 17.56216216216216, 0.9761870601839526, 0.17723953660667452},
      {{0.81, 0.84, 0.79, 0.86, 0.83, 0.80, 0.82, 0.85, 0.78, 0.84},
       {0.80, 0.83, 0.85, 0.79, 0.82, 0.81, 0.84, 0.86, 0.80, 0.83},
       0.08976244386964043, 0.46474309422390425, 17.65994712647655, 0.09539445011233415, 0.46304589004453356},
  };
  return f;
}

}  // namespace

TEST_CASE("AUROC examples") {
  CHECK(auroc(std::vector<double>{0.1, 0.4, 0.35, 0.8}, std::vector<int>{0, 0, 1, 1}) == 0.75);
  CHECK(auroc(std::vector<double>{0.1, 0.2, 0.8, 0.9}, std::vector<int>{0, 0, 1, 1}) == 1.0);
  CHECK(auroc(std::vector<double>{0.3, 0.3, 0.3, 0.3, 0.3}, std::vector<int>{0, 1, 0, 1, 1}) == 0.5);
  CHECK_THROWS_AS(auroc(std::vector<double>{0.1, 0.2}, std::vector<int>{1, 1}), MetricError);
  CHECK_THROWS_AS(auroc(std::vector<double>{0.1, 0.2}, std::vector<int>{1, 2}), MetricError);
  CHECK_THROWS_AS(auroc(std::vector<double>{0.1}, std::vector<int>{1, 0}), MetricError);
}

TEST_CASE("AUROC equals pairwise concordance on 200 random instances") {
  Rng rng(123);
  double worst = 0.0;
  for (int i = 0; i < 200; ++i) {
    const Instance in = random_instance(rng, i % 2 == 0);
    const double diff = std::abs(auroc(in.scores, in.labels) - oracle::pairwise_concordance(in.scores, in.labels));
    worst = std::max(worst, diff);
  }
  CHECK(worst <= 1e-9);
}

TEST_CASE("AUROC rank invariance and negation") {
  Rng rng(7);
  for (int i = 0; i < 100; ++i) {
    const Instance in = random_instance(rng, i % 2 == 0);
    std::vector<double> mapped, negated;
    for (double s : in.scores) {
      mapped.push_back(std::exp(3.0 * s) + 5.0);
      negated.push_back(-s);
    }
    const double a = auroc(in.scores, in.labels);
    CHECK(auroc(mapped, in.labels) == doctest::Approx(a).epsilon(1e-12));
    // With ties the tied pairs contribute one half either way, so 1 - a holds too.
    CHECK(auroc(negated, in.labels) == doctest::Approx(1.0 - a).epsilon(1e-12));
  }
}

TEST_CASE("ROC points") {
  const std::vector<CurvePoint> perfect =
      roc_points(std::vector<double>{0.1, 0.2, 0.8, 0.9}, std::vector<int>{0, 0, 1, 1});
  CHECK(perfect == std::vector<CurvePoint>{{0, 0}, {0, 1}, {1, 1}});
  Rng rng(19);
  for (int i = 0; i < 100; ++i) {
    const Instance in = random_instance(rng, i % 3 == 0);
    const std::vector<CurvePoint> roc = roc_points(in.scores, in.labels);
    CHECK(roc.front() == CurvePoint{0, 0});
    CHECK(roc.back() == CurvePoint{1, 1});
    for (std::size_t k = 1; k < roc.size(); ++k) {
      CHECK(roc[k].x >= roc[k - 1].x);
      CHECK(roc[k].y >= roc[k - 1].y);
    }
    CHECK(trapezoid(roc) == auroc(in.scores, in.labels));
    const std::vector<CurvePoint> pr = pr_points(in.scores, in.labels);
    CHECK(pr.front() == CurvePoint{0, 1});
    CHECK(pr.back().x == 1.0);
  }
}

TEST_CASE("TPR at a fixed FPR") {
  // 100 negatives at i/100; 95 positives above every negative, 5 near the bottom.
  std::vector<double> s;
  std::vector<int> y;
  for (int i = 0; i < 100; ++i) {
    s.push_back(i / 100.0);
    y.push_back(0);
  }
  for (int i = 0; i < 95; ++i) {
    s.push_back(0.995);
    y.push_back(1);
  }
  for (int i = 0; i < 5; ++i) {
    s.push_back(0.05);
    y.push_back(1);
  }
  const std::vector<CurvePoint> roc = roc_points(s, y);
  CHECK(tpr_at_fpr(roc, 0.1) == doctest::Approx(0.95).epsilon(1e-12));
  const std::vector<CurvePoint> manual{{0, 0}, {0.2, 0.6}, {1, 1}};
  CHECK(tpr_at_fpr(manual, 0.1) == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(tpr_at_fpr(manual, 0.2) == doctest::Approx(0.6).epsilon(1e-12));
  CHECK(tpr_at_fpr(manual, 1.0) == 1.0);
}

TEST_CASE("AUPRC hand-enumerated examples") {
  CHECK(auprc(std::vector<double>{0.9, 0.8, 0.7}, std::vector<int>{1, 0, 1}) == doctest::Approx(5.0 / 6.0).epsilon(1e-15));
  CHECK(auprc(std::vector<double>{0.3, 0.1, 0.9}, std::vector<int>{1, 1, 1}) == 1.0);
  // Ties collapse to one threshold: precision 2/4 at recall 1.
  CHECK(auprc(std::vector<double>{0.5, 0.5, 0.5, 0.5}, std::vector<int>{1, 0, 1, 0}) == 0.5);
  // Thresholds 0.9 (R 1/2, P 1), 0.6 (R 1/2, P 1/2), 0.4 (R 1, P 2/3).
  CHECK(auprc(std::vector<double>{0.9, 0.6, 0.4}, std::vector<int>{1, 0, 1}) == doctest::Approx(0.5 + 0.5 * 2.0 / 3.0).epsilon(1e-15));
  CHECK_THROWS_AS(auprc(std::vector<double>{0.3, 0.1}, std::vector<int>{0, 0}), MetricError);
}

TEST_CASE("AUPRC matches 50 reference fixtures") {
  const auto& fixtures = oracle::ap_fixtures();
  REQUIRE(fixtures.size() == 50);
  for (const oracle::ApFixture& f : fixtures) {
    const double got = auprc(f.scores, f.labels);
    CHECK(got == doctest::Approx(f.average_precision).epsilon(1e-12));
    CHECK(got == doctest::Approx(brute_average_precision(f.scores, f.labels)).epsilon(1e-12));
  }
}

TEST_CASE("AUPRC of random scores is near the prevalence") {
  Rng rng(31);
  std::vector<double> s;
  std::vector<int> y;
  for (int i = 0; i < 10000; ++i) {
    s.push_back(rng.uniform());
    y.push_back(i < 200 ? 1 : 0);
  }
  const double ap = auprc(s, y);
  CHECK(ap >= 0.01);
  CHECK(ap <= 0.04);
}

TEST_CASE("accuracy and F1") {
  // TP=2, FP=1, FN=1, TN=6.
  const std::vector<double> s{0.9, 0.8, 0.7, 0.2, 0.1, 0.1, 0.1, 0.1, 0.1, 0.1};
  const std::vector<int> y{1, 1, 0, 1, 0, 0, 0, 0, 0, 0};
  const AccuracyF1 r = accuracy_f1(s, y);
  CHECK(r.accuracy == doctest::Approx(0.8).epsilon(1e-15));
  CHECK(r.f1 == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  const AccuracyF1 perfect = accuracy_f1(std::vector<double>{0.9, 0.1}, std::vector<int>{1, 0});
  CHECK(perfect.accuracy == 1.0);
  CHECK(perfect.f1 == 1.0);
  CHECK(accuracy_f1(std::vector<double>{0.1, 0.2}, std::vector<int>{0, 0}).f1 == 0.0);
  CHECK(accuracy_f1(std::vector<double>{0.5}, std::vector<int>{1}).accuracy == 1.0);

  Rng rng(5);
  for (int i = 0; i < 100; ++i) {
    const Instance in = random_instance(rng, false);
    const double threshold = rng.uniform();
    double tp = 0, fp = 0, fn = 0, tn = 0;
    for (std::size_t k = 0; k < in.scores.size(); ++k) {
      const bool pred = in.scores[k] >= threshold;
      (pred ? (in.labels[k] ? tp : fp) : (in.labels[k] ? fn : tn)) += 1;
    }
    const AccuracyF1 got = accuracy_f1(in.scores, in.labels, threshold);
    CHECK(got.accuracy == doctest::Approx((tp + tn) / in.scores.size()).epsilon(1e-15));
    CHECK(got.f1 == doctest::Approx(tp + fp + fn == 0 ? 0.0 : 2 * tp / (2 * tp + fp + fn)).epsilon(1e-15));
  }
  // Threshold 0 predicts every sample positive: recall 1, precision = prevalence.
  const Instance in = random_instance(rng, false);
  const double p = static_cast<double>(std::count(in.labels.begin(), in.labels.end(), 1));
  const double precision = p / in.labels.size();
  CHECK(accuracy_f1(in.scores, in.labels, 0.0).f1 == doctest::Approx(2 * precision / (precision + 1)).epsilon(1e-12));
}

TEST_CASE("Student-t quantiles") {
  CHECK(t_quantile(0.975, 9) == doctest::Approx(2.2621571628540993).epsilon(1e-9));
  CHECK(t_quantile(0.975, 1) == doctest::Approx(12.706204736432095).epsilon(1e-9));
  CHECK(oracle::t_quantile_bisection(0.975, 9) == doctest::Approx(2.2621571628540993).epsilon(1e-6));
  double prev = 1.0;
  for (double t = -3.0; t <= 6.0; t += 0.25) {
    const double p = t_upper_tail(t, 7.3);
    CHECK(p < prev);
    prev = p;
  }
  CHECK(t_upper_tail(0.0, 4.0) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("aggregate confidence intervals") {
  SUBCASE("identical reports give zero width") {
    const std::vector<MetricsReport> r(10, report_with(0.8));
    const AggregateReport a = aggregate(r);
    CHECK(a.auroc.mean == doctest::Approx(0.8).epsilon(1e-15));
    CHECK(a.auroc.half_width_95 == 0.0);
    CHECK(a.n_runs == 10);
  }
  SUBCASE("n = 10 against the t-quantile oracle") {
    Rng rng(3);
    const double q = oracle::t_quantile_bisection(0.975, 9);
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<double> v;
      for (int i = 0; i < 10; ++i) v.push_back(rng.uniform(0.6, 0.95));
      const MeanCi ci = mean_ci95(v);
      const double m = std::accumulate(v.begin(), v.end(), 0.0) / 10.0;
      double ss = 0.0;
      for (double x : v) ss += (x - m) * (x - m);
      const double expected = q * std::sqrt(ss / 9.0) / std::sqrt(10.0);
      CHECK(std::abs(ci.half_width_95 - expected) <= 1e-3 * expected);
      CHECK(ci.mean == doctest::Approx(m).epsilon(1e-14));
    }
  }
  SUBCASE("n = 2, values 0 and 1") {
    const MeanCi ci = mean_ci95(std::vector<double>{0.0, 1.0});
    const double expected = oracle::t_quantile_bisection(0.975, 1) * std::sqrt(0.5) / std::sqrt(2.0);
    CHECK(ci.mean == 0.5);
    CHECK(std::abs(ci.half_width_95 - expected) <= 1e-3 * expected);
    CHECK(ci.half_width_95 == doctest::Approx(12.706204736432095 * 0.5).epsilon(1e-9));
  }
  SUBCASE("fewer than two runs") {
    CHECK_THROWS_AS(aggregate(std::vector<MetricsReport>{report_with(0.5)}), MetricError);
    CHECK_THROWS_AS(mean_ci95(std::vector<double>{0.5}), MetricError);
  }
  SUBCASE("permutation invariance") {
    std::vector<MetricsReport> r;
    Rng rng(8);
    for (int i = 0; i < 10; ++i) r.push_back(report_with(rng.uniform()));
    const AggregateReport a = aggregate(r);
    std::reverse(r.begin(), r.end());
    const AggregateReport b = aggregate(r);
    CHECK(a.f1.mean == doctest::Approx(b.f1.mean).epsilon(1e-14));
    CHECK(a.f1.half_width_95 == doctest::Approx(b.f1.half_width_95).epsilon(1e-12));
  }
}

TEST_CASE("Welch t-test matches the reference computation") {
  for (const WelchFixture& f : welch_fixtures()) {
    const SignificanceResult r = welch_t_test(f.a, f.b);
    CHECK(r.t_statistic == doctest::Approx(f.t).epsilon(1e-4));
    CHECK(std::abs(r.p_one_tailed - f.p) <= 1e-4);
    CHECK(r.degrees_freedom == doctest::Approx(f.df).epsilon(1e-4));
    const SignificanceResult paired = paired_t_test(f.a, f.b);
    CHECK(paired.t_statistic == doctest::Approx(f.paired_t).epsilon(1e-4));
    CHECK(std::abs(paired.p_one_tailed - f.paired_p) <= 1e-4);
  }
  // Unequal sizes.
  const SignificanceResult r = welch_t_test(std::vector<double>{0.5, 0.6, 0.55}, std::vector<double>{0.7, 0.72, 0.69, 0.75, 0.71});
  CHECK(r.t_statistic == doctest::Approx(5.350988049088729).epsilon(1e-4));
  CHECK(std::abs(r.p_one_tailed - 0.009814065801724394) <= 1e-4);
  CHECK(r.degrees_freedom == doctest::Approx(2.520766877621394).epsilon(1e-4));
  CHECK(r.direction == Favored::b);
}

TEST_CASE("t-test conventions") {
  const std::vector<double> a{0.81, 0.84, 0.79, 0.86, 0.83, 0.80, 0.82, 0.85, 0.78, 0.84};
  const SignificanceResult same = welch_t_test(a, a);
  CHECK(same.t_statistic == 0.0);
  CHECK(same.p_one_tailed == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(same.direction == Favored::neither);

  std::vector<double> b;
  const double s = sample_std(a);
  for (double x : a) b.push_back(x + 10.0 * s);
  CHECK(welch_t_test(a, b).p_one_tailed < 0.001);
  CHECK(welch_t_test(b, a).p_one_tailed > 0.999);
  CHECK(welch_t_test(b, a).direction == Favored::a);

  const std::vector<double> c1(5, 0.7), c2(5, 0.9);
  CHECK(welch_t_test(c1, c1).p_one_tailed == 0.5);
  CHECK(welch_t_test(c1, c2).p_one_tailed == 0.0);
  CHECK(welch_t_test(c2, c1).p_one_tailed == 1.0);

  std::vector<double> ap(a.rbegin(), a.rend()), bp(b.begin(), b.end());
  std::rotate(bp.begin(), bp.begin() + 3, bp.end());
  CHECK(welch_t_test(ap, bp).p_one_tailed == doctest::Approx(welch_t_test(a, b).p_one_tailed).epsilon(1e-10));
  CHECK_THROWS_AS(welch_t_test(std::vector<double>{1.0}, a), MetricError);
  CHECK_THROWS_AS(paired_t_test(a, c1), MetricError);
}

TEST_CASE("significance stars") {
  CHECK(significance_stars(0.0005) == "**");
  CHECK(significance_stars(0.01) == "*");
  CHECK(significance_stars(0.05) == "");
  CHECK(significance_stars(0.2) == "");
}

TEST_CASE("metric values and report serialisation") {
  std::vector<MetricsReport> r{report_with(0.1), report_with(0.2)};
  r[1].auroc = 0.9;
  CHECK(metric_values(r, "auroc") == std::vector<double>{0.1, 0.9});
  CHECK_THROWS_AS(metric_values(r, "precision"), MetricError);

  MetricsReport m;
  m.accuracy = 0.1 + 0.2;
  m.auroc = 1.0 / 3.0;
  m.auprc = 0.123456789012345678;
  m.f1 = 0.0;
  m.n_test = 120;
  m.threshold = 0.45;
  const std::string text = metrics_to_json(m);
  CHECK(metrics_from_json(text) == m);
  CHECK(metrics_to_json(metrics_from_json(text)) == text);
  CHECK_THROWS_AS(metrics_from_json("{\"accuracy\": 0.5}"), DataError);
  CHECK_THROWS_AS(metrics_from_json("nope"), DataError);

  const std::string csv = curve_to_csv(std::vector<CurvePoint>{{0, 0}, {0.5, 1}}, "fpr", "tpr");
  CHECK(csv.rfind("fpr,tpr\n", 0) == 0);
}

TEST_CASE("evaluate_scores bundles every metric") {
  const std::vector<double> s{0.9, 0.6, 0.4, 0.3};
  const std::vector<int> y{1, 0, 1, 0};
  const MetricsReport r = evaluate_scores(s, y, 0.5);
  CHECK(r.auroc == auroc(s, y));
  CHECK(r.auprc == auprc(s, y));
  CHECK(r.accuracy == 0.5);
  CHECK(r.n_test == 4);
  CHECK(r.threshold == 0.5);
}
