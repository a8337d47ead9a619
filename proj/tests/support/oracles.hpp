#pragma once

// Independent reference implementations used by the unit and acceptance
// tests. Everything here is deliberately naive: quadratic scans, subset
// enumeration, plain loops and a Gauss-Jordan inverse.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "flexibo/acquisition.hpp"
#include "flexibo/cost.hpp"
#include "flexibo/pareto.hpp"
#include "flexibo/rng.hpp"
#include "flexibo/surrogate.hpp"

namespace oracle {

using flexibo::FrontPoint;
using flexibo::UncertaintyRegion;
using flexibo::Vec2;

inline bool ge(const Vec2& a, const Vec2& b) { return a[0] >= b[0] && a[1] >= b[1]; }

inline bool canonical_before(const FrontPoint& a, const FrontPoint& b) {
  if (a.value[0] != b.value[0]) return a.value[0] > b.value[0];
  if (a.value[1] != b.value[1]) return a.value[1] > b.value[1];
  return a.owner < b.owner;
}

/// x survives unless another region's pessimistic corner weakly dominates
/// x's optimistic corner; identical degenerate regions never exclude each
/// other.
inline std::vector<std::size_t> undominated(std::span<const UncertaintyRegion> rs) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < rs.size(); ++i) {
    bool excluded = false;
    for (std::size_t j = 0; j < rs.size() && !excluded; ++j) {
      if (i == j) continue;
      const bool twins = rs[i].pess == rs[i].opt && rs[j].pess == rs[j].opt && rs[i].pess == rs[j].pess;
      excluded = ge(rs[j].pess, rs[i].opt) && !twins;
    }
    if (!excluded) out.push_back(rs[i].owner);
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// Points not weakly dominated by any other point; among equal values the
/// canonically first one is kept.
inline std::vector<FrontPoint> staircase(const std::vector<FrontPoint>& pts) {
  std::vector<FrontPoint> out;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    bool drop = false;
    for (std::size_t j = 0; j < pts.size() && !drop; ++j) {
      if (i == j || !ge(pts[j].value, pts[i].value)) continue;
      drop = pts[j].value != pts[i].value || canonical_before(pts[j], pts[i]);
    }
    if (!drop) out.push_back(FrontPoint{pts[i].owner, pts[i].value, false});
  }
  std::sort(out.begin(), out.end(), canonical_before);
  return out;
}

struct Fronts {
  std::vector<FrontPoint> pess, opt;
};

/// Quadratic front builder: staircase of optimistic corners, staircase of
/// pessimistic corners, plus a lifted entry (placed on the staircase at the
/// owner's first pessimistic coordinate) for every other region that reaches
/// past the pessimistic staircase along either axis.
inline Fronts build(std::span<const UncertaintyRegion> cands) {
  std::vector<FrontPoint> o, p;
  for (const auto& c : cands) {
    o.push_back(FrontPoint{c.owner, c.opt, false});
    p.push_back(FrontPoint{c.owner, c.pess, false});
  }
  Fronts f{staircase(p), staircase(o)};
  const auto base = f.pess;
  auto covered = [&](const Vec2& v) {
    return std::any_of(base.begin(), base.end(), [&](const FrontPoint& b) { return ge(b.value, v); });
  };
  for (const auto& c : cands) {
    const bool on_base = std::any_of(base.begin(), base.end(), [&](const FrontPoint& b) { return b.owner == c.owner; });
    if (on_base) continue;
    if (covered({c.opt[0], c.pess[1]}) && covered({c.pess[0], c.opt[1]})) continue;
    double level = -INFINITY;
    for (const auto& b : base)
      if (b.value[0] >= c.pess[0]) level = std::max(level, b.value[1]);
    f.pess.push_back(FrontPoint{c.owner, {c.pess[0], level}, true});
  }
  std::sort(f.pess.begin(), f.pess.end(), canonical_before);
  return f;
}

inline std::vector<Vec2> values(const std::vector<FrontPoint>& pts) {
  std::vector<Vec2> v;
  for (const auto& p : pts) v.push_back(p.value);
  return v;
}

/// Union of boxes [origin, p] by inclusion-exclusion over all subsets.
inline double area_inclusion_exclusion(const std::vector<Vec2>& pts, const Vec2& origin) {
  const std::size_t n = pts.size();
  double total = 0.0;
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << n); ++mask) {
    double x = INFINITY, y = INFINITY;
    int bits = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (!(mask >> i & 1)) continue;
      x = std::min(x, pts[i][0]);
      y = std::min(y, pts[i][1]);
      ++bits;
    }
    const double box = (x - origin[0]) * (y - origin[1]);
    total += bits % 2 ? box : -box;
  }
  return total;
}

/// Union of boxes [origin, p] on the compressed coordinate grid.
inline double area_grid(const std::vector<Vec2>& pts, const Vec2& origin) {
  std::vector<double> xs{origin[0]}, ys{origin[1]};
  for (const auto& p : pts) {
    xs.push_back(p[0]);
    ys.push_back(p[1]);
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  std::sort(ys.begin(), ys.end());
  ys.erase(std::unique(ys.begin(), ys.end()), ys.end());
  double area = 0.0;
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    for (std::size_t j = 0; j + 1 < ys.size(); ++j) {
      const bool in = std::any_of(pts.begin(), pts.end(),
                                  [&](const Vec2& p) { return p[0] >= xs[i + 1] && p[1] >= ys[j + 1]; });
      if (in) area += (xs[i + 1] - xs[i]) * (ys[j + 1] - ys[j]);
    }
  }
  return area;
}

inline bool under(const std::vector<Vec2>& pts, const Vec2& q) {
  return std::any_of(pts.begin(), pts.end(), [&](const Vec2& p) { return ge(p, q); });
}

/// Membership test for "some point weakly dominates q": points sorted by
/// first coordinate descending with a running maximum of the second.
class DominanceIndex {
 public:
  explicit DominanceIndex(std::vector<Vec2> pts) : xs_(pts.size()), best_(pts.size()) {
    std::sort(pts.begin(), pts.end(), [](const Vec2& a, const Vec2& b) { return a[0] > b[0]; });
    double m = -INFINITY;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      xs_[i] = pts[i][0];
      m = std::max(m, pts[i][1]);
      best_[i] = m;
    }
  }
  bool covers(const Vec2& q) const {
    // count of points with first coordinate >= q[0]
    const auto k = static_cast<std::size_t>(
        std::upper_bound(xs_.begin(), xs_.end(), q[0], [](double v, double x) { return v > x; }) - xs_.begin());
    return k > 0 && best_[k - 1] >= q[1];
  }

 private:
  std::vector<double> xs_, best_;
};

struct McEstimate {
  double opt_area = 0.0;  // area under the optimistic staircase
  double volume = 0.0;    // optimistic minus pessimistic area
};

/// Monte-Carlo estimates over the box [origin, hi] from one sample stream.
inline McEstimate monte_carlo(const std::vector<Vec2>& pess, const std::vector<Vec2>& opt, const Vec2& origin,
                              const Vec2& hi, std::size_t samples, std::uint64_t seed) {
  flexibo::Rng rng(seed);
  const DominanceIndex in_opt(opt), in_pess(pess);
  long long under_opt = 0, under_pess = 0;
  for (std::size_t s = 0; s < samples; ++s) {
    const Vec2 q{origin[0] + (hi[0] - origin[0]) * flexibo::uniform_unit(rng),
                 origin[1] + (hi[1] - origin[1]) * flexibo::uniform_unit(rng)};
    under_opt += in_opt.covers(q);
    under_pess += in_pess.covers(q);
  }
  const double box = (hi[0] - origin[0]) * (hi[1] - origin[1]) / static_cast<double>(samples);
  return {static_cast<double>(under_opt) * box, static_cast<double>(under_opt - under_pess) * box};
}

inline double region_volume(const Fronts& f, const Vec2& origin) {
  const double v = area_grid(values(f.opt), origin) - area_grid(values(f.pess), origin);
  return v > 0.0 ? v : 0.0;
}

/// Gauss-Jordan inverse with partial pivoting, in extended precision.
inline std::vector<std::vector<long double>> invert(std::vector<std::vector<long double>> a) {
  const std::size_t n = a.size();
  std::vector<std::vector<long double>> inv(n, std::vector<long double>(n, 0.0L));
  for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1.0L;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
    std::swap(a[c], a[piv]);
    std::swap(inv[c], inv[piv]);
    const long double d = a[c][c];
    for (std::size_t k = 0; k < n; ++k) {
      a[c][k] /= d;
      inv[c][k] /= d;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c) continue;
      const long double f = a[r][c];
      if (f == 0.0L) continue;
      for (std::size_t k = 0; k < n; ++k) {
        a[r][k] -= f * a[c][k];
        inv[r][k] -= f * inv[c][k];
      }
    }
  }
  return inv;
}

inline long double kernel(const std::vector<double>& a, const std::vector<double>& b, const flexibo::KernelParams& p) {
  long double s = 0.0L;
  for (std::size_t d = 0; d < a.size(); ++d) {
    const long double diff = static_cast<long double>(a[d]) - b[d];
    const long double l = p.length_scales[d];
    s += diff * diff / (l * l);
  }
  return p.signal_variance * std::exp(-0.5L * s);
}

/// Posterior from the explicit inverse of K + (noise + jitter) I.
inline flexibo::Prediction gp_posterior(const std::vector<std::vector<double>>& X, const std::vector<double>& y,
                                        const flexibo::KernelParams& p, double jitter, const std::vector<double>& x) {
  const std::size_t n = X.size();
  const long double diag = static_cast<long double>(p.noise_variance) + jitter;
  std::vector<std::vector<long double>> K(n, std::vector<long double>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) K[i][j] = kernel(X[i], X[j], p) + (i == j ? diag : 0.0L);
  const auto Ki = invert(K);
  std::vector<long double> k(n);
  for (std::size_t i = 0; i < n; ++i) k[i] = kernel(x, X[i], p);
  long double mean = 0.0L, quad = 0.0L;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      mean += k[i] * Ki[i][j] * y[j];
      quad += k[i] * Ki[i][j] * k[j];
    }
  }
  const long double var = p.signal_variance - quad;
  return {static_cast<double>(mean), var > 0.0L ? static_cast<double>(std::sqrt(var)) : 0.0};
}

/// Forest mean and population spread from an explicit walk of every tree.
inline flexibo::Prediction rf_explicit(const flexibo::RandomForest& rf, const std::vector<double>& x) {
  std::vector<double> leaf;
  for (const auto& tree : rf.trees()) {
    std::size_t node = 0;
    while (tree[node].feature >= 0)
      node = x[static_cast<std::size_t>(tree[node].feature)] <= tree[node].threshold ? tree[node].left : tree[node].right;
    leaf.push_back(tree[node].value);
  }
  const double w = static_cast<double>(leaf.size());
  bool same = true;
  for (double v : leaf) same = same && v == leaf.front();
  if (same) return {leaf.front(), 0.0};
  double sum = 0.0;
  for (double v : leaf) sum += v;
  const double mean = sum / w;
  double ss = 0.0;
  for (double v : leaf) ss += (mean - v) * (mean - v);
  return {mean, std::sqrt(ss / w)};
}

struct Score {
  std::size_t point;
  std::size_t objective;
  double delta_v;
  double score;
};

/// Owners on either quadratic front, ascending.
inline std::vector<std::size_t> front_owners(const Fronts& f) {
  std::vector<std::size_t> owners;
  for (const auto& p : f.pess) owners.push_back(p.owner);
  for (const auto& p : f.opt) owners.push_back(p.owner);
  std::sort(owners.begin(), owners.end());
  owners.erase(std::unique(owners.begin(), owners.end()), owners.end());
  return owners;
}

/// Clone the candidate set, collapse one coordinate to its midpoint, rebuild
/// with the quadratic builder and measure the volume drop. Scores the front
/// owners unless `owners` is given.
inline std::vector<Score> acquisition(std::span<const UncertaintyRegion> cands, const flexibo::CostModel& costs,
                                      std::optional<std::vector<std::size_t>> owners = {}) {
  const auto origin = flexibo::lower_corner(cands);
  const auto f = build(cands);
  const double v = region_volume(f, origin);
  if (!owners) owners = front_owners(f);
  std::vector<Score> out;
  for (auto owner : *owners) {
    const auto it = std::find_if(cands.begin(), cands.end(), [&](const UncertaintyRegion& r) { return r.owner == owner; });
    if (it->measured[0] && it->measured[1]) continue;
    for (std::size_t k = 0; k < 2; ++k) {
      if (it->measured[k]) continue;
      std::vector<UncertaintyRegion> clone(cands.begin(), cands.end());
      auto& r = clone[static_cast<std::size_t>(it - cands.begin())];
      const double mid = 0.5 * (r.pess[k] + r.opt[k]);
      r.pess[k] = mid;
      r.opt[k] = mid;
      const double dv = std::max(0.0, v - region_volume(build(clone), origin));
      out.push_back(Score{owner, k, dv, dv / costs.psi(k)});
    }
  }
  return out;
}

/// Random regions: means on a noisy anti-diagonal, a random subset of
/// coordinates measured (collapsed).
inline std::vector<UncertaintyRegion> random_regions(flexibo::Rng& rng, std::size_t n, double beta_t) {
  std::vector<flexibo::PointPrediction> preds(n);
  std::vector<std::array<bool, 2>> mask(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double a = flexibo::uniform_unit(rng);
    const double b = 1.0 - a + 0.3 * (flexibo::uniform_unit(rng) - 0.5);
    preds[i][0] = {a, 0.1 * flexibo::uniform_unit(rng)};
    preds[i][1] = {b, 0.1 * flexibo::uniform_unit(rng)};
    for (std::size_t k = 0; k < 2; ++k) {
      mask[i][k] = flexibo::uniform_unit(rng) < 0.25;
      if (mask[i][k]) preds[i][k].std = 0.0;
    }
  }
  return flexibo::regions(preds, beta_t, mask);
}

}  // namespace oracle
