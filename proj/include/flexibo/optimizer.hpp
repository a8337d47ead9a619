#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "flexibo/acquisition.hpp"
#include "flexibo/cost.hpp"
#include "flexibo/design_space.hpp"
#include "flexibo/execution.hpp"
#include "flexibo/pareto.hpp"
#include "flexibo/surrogate.hpp"

namespace flexibo {

struct Evaluation {
  double value = 0.0;   // internal (maximization) sign
  double effort = 0.0;  // simulated raw effort theta
};

/// Black-box problem. evaluate() must be deterministic in
/// (flat_id, objective) so runs are reproducible.
class Oracle {
 public:
  virtual ~Oracle() = default;
  virtual const DesignSpace& space() const = 0;
  virtual const std::array<ObjectiveSpec, 2>& objectives() const = 0;
  virtual Evaluation evaluate(std::size_t flat_id, std::size_t objective) const = 0;
};

struct EvaluationRecord {
  std::size_t flat_id = 0;
  std::size_t objective = 0;  // 0 or 1
  double value = 0.0;         // internal sign
  double cost = 0.0;          // psi charged
  std::size_t iteration = 0;  // 0 for the initial design
  double wall_seconds = 0.0;  // since run start
};

enum class SurrogateKind { gp, rf };
enum class ImprovementCriterion { probability, expected };

struct SurrogateSettings {
  double length_scale = 0.2;
  double signal_variance = 1.0;
  double noise_variance = 1e-6;
  std::size_t refresh_every = 10;  // 0 disables the marginal-likelihood grid search
  ForestOptions forest;
};

struct RunSettings {
  std::size_t iterations = 200;
  std::size_t init_k = 15;
  std::uint64_t seed = 0;
  CostModel costs;
  SurrogateKind surrogate = SurrogateKind::gp;
  SurrogateSettings model;
  double delta = 0.05;
  double epsilon_frac = 0.00004;
  ImprovementCriterion sobo_criterion = ImprovementCriterion::probability;
  /// Halt after the first evaluation that pushes cumulative cost past this.
  std::optional<double> budget;
  /// Random search: upper bound on expensive-objective evaluations.
  std::optional<std::size_t> expensive_cap;
  /// Reference point for actual-front hypervolume in the trace.
  std::optional<Vec2> reference;
  std::filesystem::path checkpoint_path;
  std::size_t checkpoint_every = 25;
  bool record_scores = false;
  Execution exec = Execution::parallel;
};

struct IterationTrace {
  std::size_t t = 0;
  std::size_t flat_id = 0;
  std::vector<std::size_t> objectives;
  std::vector<double> values;  // internal sign, parallel to objectives
  double cost = 0.0;
  double cumulative_cost = 0.0;
  std::optional<double> volume;
  std::optional<double> hypervolume;
  double beta = 0.0;
  std::size_t undominated = 0;
  std::size_t pess_size = 0;
  std::size_t opt_size = 0;
  std::vector<AcquisitionScore> scores;
};

enum class StopReason { iterations, converged, exhausted, budget };
std::string_view to_string(StopReason r);

struct RunResult {
  std::string method;
  std::vector<EvaluationRecord> records;
  std::vector<IterationTrace> trace;
  ParetoFront actual_front{FrontKind::actual, {}};
  std::optional<ParetoRegion> region;
  std::optional<std::size_t> best_point;
  double total_cost = 0.0;
  StopReason stop = StopReason::iterations;

  std::size_t count(std::size_t objective) const;
};

/// Serializable optimizer progress, written as a checkpoint.
struct OptimizerState {
  std::string method;
  std::size_t t = 0;
  std::uint64_t seed = 0;
  std::vector<std::size_t> evaluated;  // S_t: flat ids with >= 1 evaluation
  std::vector<std::array<bool, 2>> mask;
  std::size_t undominated = 0;
  std::optional<double> volume;
  double cumulative_cost = 0.0;
  std::vector<EvaluationRecord> records;

  nlohmann::json to_json() const;
};

/// Oracle failure; carries the state at the time of the failure.
class OracleFailure : public std::runtime_error {
 public:
  OracleFailure(const std::string& what, nlohmann::json checkpoint)
      : std::runtime_error(what), checkpoint_(std::move(checkpoint)) {}
  const nlohmann::json& checkpoint() const { return checkpoint_; }

 private:
  nlohmann::json checkpoint_;
};

/// Cost-aware decoupled loop: each iteration evaluates exactly one
/// (point, objective) pair maximizing Pareto-region volume reduction per
/// unit cost.
RunResult flexibo_run(const Oracle& oracle, const RunSettings& settings);

/// Coupled baseline with epsilon-classification and largest-diagonal
/// sampling; every evaluation measures both objectives.
RunResult pal_run(const Oracle& oracle, const RunSettings& settings);

/// Uniform random (point, objective) pairs, respecting the expensive cap.
/// There is no initial design; every evaluation is a random draw.
RunResult rs_run(const Oracle& oracle, const RunSettings& settings);

/// Single-objective BO on `target` (0 or 1) measuring both objectives per
/// iteration.
RunResult sobo_run(const Oracle& oracle, std::size_t target, const RunSettings& settings);

/// Improvement probability over `incumbent`; zero spread means 0 unless
/// the mean strictly improves.
double probability_of_improvement(const Prediction& p, double incumbent);
double expected_improvement(const Prediction& p, double incumbent);

}  // namespace flexibo
