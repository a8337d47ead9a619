#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "flexibo/cost.hpp"
#include "flexibo/execution.hpp"
#include "flexibo/pareto.hpp"
#include "flexibo/surrogate.hpp"

namespace flexibo {

struct BetaSchedule {
  std::size_t objectives = 2;
  std::size_t space_size = 1;
  double delta = 0.05;
};

/// beta_t = (1/3) * sqrt(2 ln(n |E| pi^2 t^2 / (6 delta))). Throws
/// std::domain_error for t < 1 or a log argument <= 1.
double beta(std::size_t t, const BetaSchedule& schedule);

/// Regions mu -/+ sqrt(beta_t) sigma; region i belongs to flat id i.
/// `measured` (optional, one mask per point) marks collapsed coordinates.
std::vector<UncertaintyRegion> regions(std::span<const PointPrediction> predictions, double beta_t,
                                       std::span<const std::array<bool, 2>> measured = {});

struct AcquisitionScore {
  std::size_t point = 0;      // flat id
  std::size_t objective = 0;  // 0 or 1
  double delta_v = 0.0;
  double cost = 1.0;
  double score = 0.0;  // delta_v / cost
};

/// Owners on either front, ascending and de-duplicated.
std::vector<std::size_t> front_owners(const Fronts& fronts);

/// For every scored owner and each unmeasured objective: collapse that
/// coordinate of its region to the midpoint, rebuild both fronts over the
/// whole candidate set, and score the volume drop per unit cost. Owners
/// measured on both objectives are skipped. `origin` must be the one used
/// for `current_volume`.
std::vector<AcquisitionScore> volume_change_per_cost(std::span<const UncertaintyRegion> candidates,
                                                     std::span<const std::size_t> scored_owners,
                                                     double current_volume, const Vec2& origin,
                                                     const CostModel& costs,
                                                     Execution exec = Execution::parallel);

/// Highest score; ties go to the cheaper objective, then the lower flat id,
/// then objective 1. Empty input yields nullopt.
std::optional<AcquisitionScore> select_next(std::span<const AcquisitionScore> scores);

}  // namespace flexibo
