#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "flexibo/results.hpp"

namespace flexibo {

/// Quantile with linear interpolation between order statistics
/// (h = (n - 1) p). Throws on empty input.
double quantile(std::vector<double> values, double p);

struct Spread {
  double median = 0.0;
  double q25 = 0.0;
  double q75 = 0.0;
};
Spread spread(const std::vector<double>& values);

struct CostRow {
  Mode mode = Mode::fcm;
  std::string method;
  std::size_t runs = 0;
  Spread total_cost;
  Spread count_obj1;
  Spread count_obj2;
  Spread wall_time;
};

struct MetricRow {
  Mode mode = Mode::fcm;
  std::string method;
  std::optional<Spread> contribution;
  std::optional<Spread> diversity;
};

struct SeriesPoint {
  std::size_t iteration = 0;
  Spread hypervolume;
};

struct Series {
  Mode mode = Mode::fcm;
  std::string method;
  std::vector<SeriesPoint> points;
};

struct Report {
  std::string problem;
  Vec2 reference{};
  std::vector<CostRow> costs;
  std::vector<MetricRow> metrics;
  std::vector<Series> series;
};

/// Hypervolume of the fully measured points after each iteration, replayed
/// from a trace (index = iteration, starting with the initial design).
std::vector<double> hypervolume_series(const std::vector<TraceLine>& lines,
                                       const std::array<ObjectiveSpec, 2>& objectives, const Vec2& reference);

/// Builds the tables from result directories (or their summary.jsonl
/// files). Inputs covering more than one problem are rejected. Runs that end
/// early carry their last hypervolume forward in the series.
Report build_report(std::span<const std::filesystem::path> inputs, std::optional<Vec2> reference = {});

/// cost_table.csv, metrics.csv and hv_series.csv under `dir`.
void write_report(const Report& report, const std::filesystem::path& dir);
std::string format_report(const Report& report);

}  // namespace flexibo
