#include "lesion/report_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "lesion/error.hpp"

namespace lesion {

using nlohmann::ordered_json;

namespace {

ordered_json ci_json(const MeanCi& ci) {
  ordered_json j;
  j["mean"] = ci.mean;
  j["half_width_95"] = ci.half_width_95;
  return j;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string metrics_to_json(const MetricsReport& r) {
  ordered_json j;
  j["accuracy"] = r.accuracy;
  j["auroc"] = r.auroc;
  j["auprc"] = r.auprc;
  j["f1"] = r.f1;
  j["n_test"] = r.n_test;
  j["threshold"] = r.threshold;
  return j.dump(2) + "\n";
}

MetricsReport metrics_from_json(const std::string& text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw DataError(std::string("report is not valid JSON: ") + e.what());
  }
  MetricsReport r;
  auto get = [&](const char* key) {
    if (!j.contains(key) || !j.at(key).is_number()) {
      throw DataError(std::string("report schema error: missing metric '") + key + "'");
    }
    return j.at(key).get<double>();
  };
  r.accuracy = get("accuracy");
  r.auroc = get("auroc");
  r.auprc = get("auprc");
  r.f1 = get("f1");
  r.n_test = static_cast<std::size_t>(get("n_test"));
  r.threshold = j.value("threshold", 0.5);
  return r;
}

std::string aggregate_to_json(const AggregateReport& r) {
  ordered_json j;
  j["n_runs"] = r.n_runs;
  j["accuracy"] = ci_json(r.accuracy);
  j["auroc"] = ci_json(r.auroc);
  j["auprc"] = ci_json(r.auprc);
  j["f1"] = ci_json(r.f1);
  return j.dump(2) + "\n";
}

std::string significance_to_json(const SignificanceResult& s, const std::string& metric) {
  ordered_json j;
  j["metric"] = metric;
  j["t_statistic"] = s.t_statistic;
  j["degrees_freedom"] = s.degrees_freedom;
  j["p_one_tailed"] = s.p_one_tailed;
  j["favored"] = to_string(s.direction);
  j["stars"] = significance_stars(s.p_one_tailed);
  return j.dump(2) + "\n";
}

std::string curve_to_csv(std::span<const CurvePoint> points, const std::string& x_name,
                         const std::string& y_name) {
  std::string out = x_name + "," + y_name + "\n";
  for (const CurvePoint& p : points) out += format_double(p.x) + "," + format_double(p.y) + "\n";
  return out;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace lesion
