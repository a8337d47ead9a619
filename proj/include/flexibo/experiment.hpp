#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "flexibo/optimizer.hpp"
#include "flexibo/results.hpp"

namespace flexibo {

/// flexibo-gp, flexibo-rf, pal, rs, sobo-1, sobo-2
const std::vector<std::string>& known_methods();
bool is_flexibo(std::string_view method);

struct RunManifest {
  std::string problem;
  std::vector<std::string> methods;
  std::vector<std::uint64_t> seeds;
  std::vector<Mode> modes{Mode::fcm};
  /// Shared settings; seed, budget, expensive_cap and reference are filled
  /// per run. `surrogate` applies to PAL; FlexiBO takes it from its name.
  RunSettings settings;
  double noise_std = 0.0;
  std::size_t div = 10;
  std::size_t jobs = 1;
  /// Results root; nothing is written when empty.
  std::filesystem::path out;
  /// Summary of an earlier FlexiBO run supplying the TBM budget and the RS
  /// expensive cap when the manifest has no FlexiBO method.
  std::optional<std::filesystem::path> budget_from;
};

struct BudgetReference {
  double cost = 0.0;
  std::size_t expensive_count = 0;
};

/// Reads total cost and expensive-objective count from a summary file (or
/// a run directory holding summary_fcm.json).
BudgetReference read_budget(const std::filesystem::path& path, const CostModel& costs);

struct CellResult {
  std::string method;
  std::uint64_t seed = 0;
  Mode mode = Mode::fcm;
  RunResult result;
  RunSummary summary;
  std::string error;  // empty on success
};

struct ExperimentResult {
  std::vector<CellResult> cells;  // ordered by mode, manifest method order, seed

  bool ok() const;
  const CellResult* find(std::string_view method, std::uint64_t seed, Mode mode) const;
};

/// Throws std::invalid_argument on unknown or duplicate methods, an empty
/// seed list, or a TBM request without a budget source.
void validate_manifest(const RunManifest& manifest);

/// Runs every (method, seed, mode) cell on a pool of `jobs` workers.
/// FlexiBO runs first; each seed's run sets the TBM budget and the RS
/// expensive cap for that seed. In TBM the baselines are bounded only by
/// the budget and exhaustion, not by the iteration count. Failures abort the
/// affected cell only.
ExperimentResult run_experiment(const RunManifest& manifest);

}  // namespace flexibo
