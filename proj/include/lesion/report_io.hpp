#pragma once

#include <filesystem>
#include <span>
#include <string>

#include "lesion/metrics.hpp"
#include "lesion/stats.hpp"

namespace lesion {

// Reports are JSON objects with fixed key order, so identical values give
// identical bytes.
std::string metrics_to_json(const MetricsReport& report);
MetricsReport metrics_from_json(const std::string& text);

std::string aggregate_to_json(const AggregateReport& report);
std::string significance_to_json(const SignificanceResult& result, const std::string& metric);

// Two-column CSV with a header line, e.g. "fpr,tpr".
std::string curve_to_csv(std::span<const CurvePoint> points, const std::string& x_name,
                         const std::string& y_name);

void write_text(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);

}  // namespace lesion
