#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace flexibo {

/// A point in the bi-objective space, both coordinates maximized.
using Vec2 = std::array<double, 2>;

/// Weak dominance: a_i >= b_i for both objectives.
inline bool dominates(const Vec2& a, const Vec2& b) { return a[0] >= b[0] && a[1] >= b[1]; }

/// Axis-aligned box [pess, opt] around a surrogate prediction. A measured
/// objective has pess == opt along its coordinate.
struct UncertaintyRegion {
  std::size_t owner = 0;
  Vec2 pess{};
  Vec2 opt{};
  std::array<bool, 2> measured{false, false};

  bool degenerate() const { return pess == opt; }
};

enum class FrontKind { pessimistic, optimistic, actual };

struct FrontPoint {
  std::size_t owner = 0;
  Vec2 value{};
  // Pessimistic-front entry whose own corner is dominated but whose region
  // reaches past the front; value sits on the front at the owner's first
  // coordinate, so it never changes the dominated area.
  bool lifted = false;

  friend bool operator==(const FrontPoint&, const FrontPoint&) = default;
};

/// Sorted descending by objective 1, then descending by objective 2, then
/// ascending owner.
struct ParetoFront {
  FrontKind kind = FrontKind::actual;
  std::vector<FrontPoint> points;

  std::vector<std::size_t> owners() const;
  std::vector<Vec2> values() const;
  bool empty() const { return points.empty(); }
};

struct Fronts {
  ParetoFront pess{FrontKind::pessimistic, {}};
  ParetoFront opt{FrontKind::optimistic, {}};
};

struct ParetoRegion {
  ParetoFront pess{FrontKind::pessimistic, {}};
  ParetoFront opt{FrontKind::optimistic, {}};
  Vec2 origin{};
  double volume = 0.0;
};

/// Canonical ordering used for every front.
bool front_order(const FrontPoint& a, const FrontPoint& b);

/// Owners of regions that are not dominated in their best case by another
/// region's worst case. Identical degenerate regions do not exclude each
/// other. Returned ascending. O(n log n).
std::vector<std::size_t> undominated_set(std::span<const UncertaintyRegion> regions);

/// Non-dominated staircase of the given points; weakly dominated duplicates
/// keep the first entry in canonical order.
ParetoFront nondominated_front(std::span<const FrontPoint> points, FrontKind kind = FrontKind::actual);

/// Pessimistic and optimistic fronts over a candidate set. The optimistic
/// front is the staircase of optimistic corners. The pessimistic front is
/// the staircase of pessimistic corners plus lifted entries for candidates
/// whose corner is dominated but whose region extends past the staircase
/// along either objective.
Fronts build_fronts(std::span<const UncertaintyRegion> candidates);

/// Componentwise minimum of the pessimistic corners.
Vec2 lower_corner(std::span<const UncertaintyRegion> regions);

/// Exact area of the union of boxes [origin, p]. Throws std::domain_error
/// when a point lies below the origin.
double staircase_area(std::span<const FrontPoint> front, const Vec2& origin);
double staircase_area(std::span<const Vec2> front, const Vec2& origin);

inline double hypervolume(const ParetoFront& front, const Vec2& reference) {
  return staircase_area(front.points, reference);
}

/// area(optimistic) - area(pessimistic), clamped at 0.
double region_volume(const Fronts& fronts, const Vec2& origin);
ParetoRegion make_region(Fronts fronts, const Vec2& origin);

}  // namespace flexibo
