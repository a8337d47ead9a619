#include "flexibo/pareto.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <string>

namespace flexibo {

std::vector<std::size_t> ParetoFront::owners() const {
  std::vector<std::size_t> out;
  out.reserve(points.size());
  for (const auto& p : points) out.push_back(p.owner);
  return out;
}

std::vector<Vec2> ParetoFront::values() const {
  std::vector<Vec2> out;
  out.reserve(points.size());
  for (const auto& p : points) out.push_back(p.value);
  return out;
}

bool front_order(const FrontPoint& a, const FrontPoint& b) {
  if (a.value[0] != b.value[0]) return a.value[0] > b.value[0];
  if (a.value[1] != b.value[1]) return a.value[1] > b.value[1];
  return a.owner < b.owner;
}

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Points sorted descending by first coordinate with a running maximum of
// the second; answers "highest second coordinate among points whose first
// coordinate is >= a (or > a)".
class PrefixMax {
 public:
  explicit PrefixMax(std::vector<Vec2> pts) : pts_(std::move(pts)) {
    std::sort(pts_.begin(), pts_.end(), [](const Vec2& a, const Vec2& b) { return a[0] > b[0]; });
    best_.resize(pts_.size());
    double m = kNegInf;
    for (std::size_t i = 0; i < pts_.size(); ++i) {
      m = std::max(m, pts_[i][1]);
      best_[i] = m;
    }
  }

  double at_least(double a) const {
    auto it = std::partition_point(pts_.begin(), pts_.end(), [a](const Vec2& p) { return p[0] >= a; });
    return lookup(it);
  }
  double greater_than(double a) const {
    auto it = std::partition_point(pts_.begin(), pts_.end(), [a](const Vec2& p) { return p[0] > a; });
    return lookup(it);
  }
  /// True when some stored point weakly dominates q.
  bool covers(const Vec2& q) const { return at_least(q[0]) >= q[1]; }

 private:
  double lookup(std::vector<Vec2>::const_iterator it) const {
    const auto k = static_cast<std::size_t>(it - pts_.begin());
    return k == 0 ? kNegInf : best_[k - 1];
  }
  std::vector<Vec2> pts_;
  std::vector<double> best_;
};

}  // namespace

std::vector<std::size_t> undominated_set(std::span<const UncertaintyRegion> regions) {
  std::vector<Vec2> pess;
  pess.reserve(regions.size());
  for (const auto& r : regions) pess.push_back(r.pess);
  const PrefixMax worst(pess);

  // Pessimistic corners shared with at least one non-degenerate region.
  std::vector<Vec2> shared_nondegenerate;
  for (const auto& r : regions)
    if (!r.degenerate()) shared_nondegenerate.push_back(r.pess);
  std::sort(shared_nondegenerate.begin(), shared_nondegenerate.end());

  std::vector<std::size_t> out;
  for (const auto& r : regions) {
    bool excluded;
    if (!r.degenerate()) {
      excluded = worst.covers(r.opt);
    } else {
      const Vec2& p = r.opt;
      excluded = worst.greater_than(p[0]) >= p[1] || worst.at_least(p[0]) > p[1] ||
                 std::binary_search(shared_nondegenerate.begin(), shared_nondegenerate.end(), p);
    }
    if (!excluded) out.push_back(r.owner);
  }
  std::sort(out.begin(), out.end());
  return out;
}

ParetoFront nondominated_front(std::span<const FrontPoint> points, FrontKind kind) {
  std::vector<FrontPoint> sorted(points.begin(), points.end());
  std::sort(sorted.begin(), sorted.end(), front_order);
  ParetoFront front{kind, {}};
  double best = kNegInf;
  for (const auto& p : sorted) {
    if (p.value[1] > best) {
      front.points.push_back(FrontPoint{p.owner, p.value, false});
      best = p.value[1];
    }
  }
  return front;
}

Fronts build_fronts(std::span<const UncertaintyRegion> candidates) {
  Fronts fronts;
  if (candidates.empty()) return fronts;

  std::vector<FrontPoint> opt_corners, pess_corners;
  opt_corners.reserve(candidates.size());
  pess_corners.reserve(candidates.size());
  for (const auto& c : candidates) {
    opt_corners.push_back(FrontPoint{c.owner, c.opt, false});
    pess_corners.push_back(FrontPoint{c.owner, c.pess, false});
  }
  fronts.opt = nondominated_front(opt_corners, FrontKind::optimistic);
  fronts.pess = nondominated_front(pess_corners, FrontKind::pessimistic);

  std::vector<Vec2> base = fronts.pess.values();
  const PrefixMax staircase(base);
  std::vector<std::size_t> on_front = fronts.pess.owners();
  std::sort(on_front.begin(), on_front.end());

  for (const auto& c : candidates) {
    if (std::binary_search(on_front.begin(), on_front.end(), c.owner)) continue;
    const Vec2 reach_first{c.opt[0], c.pess[1]};
    const Vec2 reach_second{c.pess[0], c.opt[1]};
    if (staircase.covers(reach_first) && staircase.covers(reach_second)) continue;
    fronts.pess.points.push_back(FrontPoint{c.owner, {c.pess[0], staircase.at_least(c.pess[0])}, true});
  }
  std::sort(fronts.pess.points.begin(), fronts.pess.points.end(), front_order);
  return fronts;
}

Vec2 lower_corner(std::span<const UncertaintyRegion> regions) {
  Vec2 lo{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
  for (const auto& r : regions) {
    lo[0] = std::min(lo[0], r.pess[0]);
    lo[1] = std::min(lo[1], r.pess[1]);
  }
  return lo;
}

double staircase_area(std::span<const Vec2> front, const Vec2& origin) {
  std::vector<Vec2> sorted(front.begin(), front.end());
  for (const auto& p : sorted) {
    if (p[0] < origin[0] || p[1] < origin[1])
      throw std::domain_error("front point (" + std::to_string(p[0]) + ", " + std::to_string(p[1]) +
                              ") lies below the reference point");
  }
  std::sort(sorted.begin(), sorted.end(), [](const Vec2& a, const Vec2& b) {
    return a[0] != b[0] ? a[0] > b[0] : a[1] > b[1];
  });
  double area = 0.0;
  double height = origin[1];
  for (const auto& p : sorted) {
    if (p[1] > height) {
      area += (p[0] - origin[0]) * (p[1] - height);
      height = p[1];
    }
  }
  return area;
}

double staircase_area(std::span<const FrontPoint> front, const Vec2& origin) {
  std::vector<Vec2> values;
  values.reserve(front.size());
  for (const auto& p : front) values.push_back(p.value);
  return staircase_area(values, origin);
}

double region_volume(const Fronts& fronts, const Vec2& origin) {
  const double v = staircase_area(fronts.opt.points, origin) - staircase_area(fronts.pess.points, origin);
  return v > 0.0 ? v : 0.0;
}

ParetoRegion make_region(Fronts fronts, const Vec2& origin) {
  ParetoRegion pr;
  pr.volume = region_volume(fronts, origin);
  pr.pess = std::move(fronts.pess);
  pr.opt = std::move(fronts.opt);
  pr.origin = origin;
  return pr;
}

}  // namespace flexibo
