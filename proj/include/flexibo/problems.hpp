#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "flexibo/optimizer.hpp"

namespace flexibo {

/// Objective function over the encoded coordinates of a design point,
/// returning the value in the reported (user-facing) sign.
using ObjectiveFn = std::function<double(std::span<const double> x, const DesignPoint& p)>;

/// Bi-objective benchmark with simulated efforts. Values are a pure
/// function of (flat_id, objective); optional Gaussian noise comes from a
/// stream seeded per pair and is reduced by the median of ten draws.
class SyntheticProblem : public Oracle {
 public:
  SyntheticProblem(std::string name, std::string summary, DesignSpace space,
                   std::array<ObjectiveSpec, 2> objectives, std::array<ObjectiveFn, 2> fns,
                   std::array<double, 2> theta = {1.0, 10.0});

  const std::string& name() const { return name_; }
  const std::string& summary() const { return summary_; }
  const DesignSpace& space() const override { return space_; }
  const std::array<ObjectiveSpec, 2>& objectives() const override { return objectives_; }
  const std::array<double, 2>& theta() const { return theta_; }
  Evaluation evaluate(std::size_t flat_id, std::size_t objective) const override;

  void set_noise(double std_dev, std::uint64_t seed);
  double noise_std() const { return noise_std_; }

  /// Internal-sign values of every point.
  std::vector<Vec2> all_values() const;
  /// Exhaustive non-dominated front over the whole grid.
  ParetoFront true_front() const;
  /// Componentwise minimum over the grid; every front lies above it.
  Vec2 reference() const;

  /// Flat ids of the closed-form optimal set, when known.
  const std::optional<std::vector<std::size_t>>& analytic_front() const { return analytic_; }
  void set_analytic_front(std::vector<std::size_t> ids) { analytic_ = std::move(ids); }

 private:
  std::string name_;
  std::string summary_;
  DesignSpace space_;
  std::array<ObjectiveSpec, 2> objectives_;
  std::array<ObjectiveFn, 2> fns_;
  std::array<double, 2> theta_;
  std::vector<std::vector<double>> encoded_;
  double noise_std_ = 0.0;
  std::uint64_t noise_seed_ = 0;
  std::optional<std::vector<std::size_t>> analytic_;
};

/// concave, convex, cliff and cheap-dim.
std::vector<std::string> builtin_problem_names();
std::unique_ptr<SyntheticProblem> make_problem(std::string_view name);
std::vector<std::unique_ptr<SyntheticProblem>> builtin_problems();

}  // namespace flexibo
