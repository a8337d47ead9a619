#pragma once

// Shared machinery for the optimizer loops: the evaluation ledger and the
// per-objective surrogate bank.

#include <chrono>
#include <vector>

#include "flexibo/optimizer.hpp"

namespace flexibo::detail {

class Ledger {
 public:
  Ledger(const Oracle& oracle, const RunSettings& settings, std::string method);

  std::size_t size() const { return mask_.size(); }
  bool evaluated(std::size_t id, std::size_t k) const { return mask_[id][k]; }
  bool fully_evaluated(std::size_t id) const { return mask_[id][0] && mask_[id][1]; }
  bool touched(std::size_t id) const { return mask_[id][0] || mask_[id][1]; }
  const std::vector<std::array<bool, 2>>& masks() const { return mask_; }
  double value(std::size_t id, std::size_t k) const { return values_[id][k]; }
  double cumulative() const { return cumulative_; }
  std::size_t count(std::size_t k) const { return counts_[k]; }
  std::size_t pairs_left() const { return 2 * size() - records_.size(); }

  /// Charges psi_k and records the measurement. Evaluating a pair twice is a
  /// logic error. Oracle exceptions become OracleFailure with a checkpoint.
  double evaluate(std::size_t id, std::size_t k, std::size_t t);
  /// Measures both objectives of init_k random points at t = 0.
  void initialize();

  bool over_budget() const;
  std::vector<Observation> observations() const;
  std::vector<std::size_t> training_ids(std::size_t k) const;
  ParetoFront actual_front() const;
  std::optional<double> hypervolume() const;

  OptimizerState state(std::size_t t, std::size_t undominated = 0, std::optional<double> volume = {}) const;
  void maybe_checkpoint(std::size_t t, std::size_t undominated = 0, std::optional<double> volume = {}) const;

  IterationTrace trace_entry(std::size_t t, std::size_t id, std::vector<std::size_t> objectives,
                             double cost_before) const;
  RunResult finish(std::vector<IterationTrace> trace, StopReason stop) const;

 private:
  void write_checkpoint(const nlohmann::json& doc) const;

  const Oracle& oracle_;
  const RunSettings& settings_;
  std::string method_;
  std::vector<std::array<bool, 2>> mask_;
  std::vector<std::array<double, 2>> values_;
  std::vector<EvaluationRecord> records_;
  std::array<std::size_t, 2> counts_{0, 0};
  double cumulative_ = 0.0;
  std::size_t current_t_ = 0;
  std::chrono::steady_clock::time_point start_;
};

/// Fits one surrogate per objective on that objective's measurements
/// (targets standardized) and predicts the whole design space.
class ModelBank {
 public:
  ModelBank(const Oracle& oracle, const RunSettings& settings);

  void predict_objective(const Ledger& ledger, std::size_t k, std::size_t t, std::span<Prediction> out);
  /// Predictions for both objectives with measured pairs overridden.
  std::vector<PointPrediction> predict_all(const Ledger& ledger, std::size_t t);

 private:
  const RunSettings& settings_;
  Eigen::MatrixXd design_;
  std::array<KernelParams, 2> params_;
};

}  // namespace flexibo::detail
