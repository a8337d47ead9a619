#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "flexibo/optimizer.hpp"

namespace flexibo {

inline constexpr int kSchemaVersion = 1;

enum class Mode { fcm, tbm };
std::string_view to_string(Mode m);
Mode parse_mode(std::string_view text);

/// One line of a trace file: the initial design (t = 0, one line per point)
/// followed by one line per iteration. Values use the reported sign.
struct TraceLine {
  std::size_t t = 0;
  std::size_t flat_id = 0;
  std::vector<std::size_t> objectives;  // 1-based
  std::vector<double> values;
  double cost = 0.0;
  double cumulative_cost = 0.0;
  std::optional<double> volume;
  std::optional<double> hypervolume;

  nlohmann::json to_json() const;
  static TraceLine from_json(const nlohmann::json& j);
};

std::vector<TraceLine> trace_lines(const RunResult& result, const std::array<ObjectiveSpec, 2>& objectives);

struct FrontEntry {
  std::size_t flat_id = 0;
  Vec2 values{};  // reported sign
};

/// Final record of one (problem, method, seed, mode) run.
struct RunSummary {
  std::string problem;
  std::string method;
  std::uint64_t seed = 0;
  Mode mode = Mode::fcm;
  std::array<ObjectiveSpec, 2> objectives;
  Vec2 reference{};  // internal sign
  std::size_t iterations = 0;
  std::string stop;
  double total_cost = 0.0;
  std::array<std::size_t, 2> counts{0, 0};
  std::optional<double> budget;
  std::optional<std::size_t> expensive_cap;
  double hypervolume = 0.0;
  std::optional<double> contribution;
  std::optional<double> diversity;
  std::optional<double> final_volume;
  std::vector<FrontEntry> front;
  std::optional<std::size_t> best_point;
  double wall_time = 0.0;

  nlohmann::json to_json() const;
  static RunSummary from_json(const nlohmann::json& j);
};

std::string csv_header();
std::string csv_row(const RunSummary& s);

nlohmann::json read_json_file(const std::filesystem::path& path);
std::vector<nlohmann::json> read_json_lines(const std::filesystem::path& path);
/// Writes through a temporary file and renames it into place.
void write_text_file(const std::filesystem::path& path, const std::string& text);

/// <root>/<problem>/<method>/seed-<s>
std::filesystem::path run_directory(const std::filesystem::path& root, const std::string& problem,
                                    const std::string& method, std::uint64_t seed);

}  // namespace flexibo
