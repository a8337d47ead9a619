#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "flexibo/optimizer.hpp"
#include "flexibo/pareto.hpp"

namespace flexibo {

struct NamedFront {
  std::string name;
  ParetoFront front;
};

/// Competing fronts, their combined non-dominated front P_s and the
/// hypervolume reference point. The reference defaults to the componentwise
/// minimum over every supplied point.
class ComparisonSet {
 public:
  explicit ComparisonSet(std::vector<NamedFront> fronts, std::optional<Vec2> reference = {});

  const std::vector<NamedFront>& fronts() const { return fronts_; }
  const ParetoFront& combined() const { return combined_; }
  const Vec2& reference() const { return reference_; }
  double combined_hypervolume() const { return combined_hv_; }

 private:
  std::vector<NamedFront> fronts_;
  ParetoFront combined_{FrontKind::actual, {}};
  Vec2 reference_{};
  double combined_hv_ = 0.0;
};

/// Share of the combined front's hypervolume covered by the points of
/// `front` that no other combined point dominates. 0 when none survive.
double contribution(const ParetoFront& front, const ComparisonSet& cmp);

/// Grid between the ideal and nadir points (componentwise max and min of
/// the combined front). Works in the negated frame so the lower bound sits
/// at the ideal point and the upper bound pads past the nadir by half a
/// division.
class DiversityGrid {
 public:
  DiversityGrid(const Vec2& ideal, const Vec2& nadir, std::size_t div = 10);
  static DiversityGrid from(const ComparisonSet& cmp, std::size_t div = 10);

  const Vec2& ideal() const { return ideal_; }
  const Vec2& nadir() const { return nadir_; }
  std::size_t divisions() const { return div_; }
  const Vec2& lower() const { return lb_; }
  const Vec2& upper() const { return ub_; }
  const Vec2& box_size() const { return d_; }

  /// Box indices of a (maximization-frame) point, clamped into the grid.
  std::array<std::size_t, 2> box(const Vec2& p) const;

 private:
  Vec2 ideal_, nadir_;
  std::size_t div_;
  Vec2 lb_{}, ub_{}, d_{};
};

/// Occupied boxes over div^2.
double diversity(std::span<const Vec2> points, const DiversityGrid& grid);
inline double diversity(const ParetoFront& front, const DiversityGrid& grid) {
  const auto v = front.values();
  return diversity(v, grid);
}

/// Signed volume drop; negative when the region grew.
inline double volume_reduction(double v_before, double v_after) { return v_before - v_after; }

struct CostSummary {
  double total = 0.0;
  std::array<std::size_t, 2> counts{0, 0};
};

CostSummary cost_summary(std::span<const EvaluationRecord> records);

}  // namespace flexibo
