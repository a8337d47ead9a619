#include "flexibo/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace flexibo {

ComparisonSet::ComparisonSet(std::vector<NamedFront> fronts, std::optional<Vec2> reference)
    : fronts_(std::move(fronts)) {
  std::vector<FrontPoint> all;
  for (const auto& f : fronts_) all.insert(all.end(), f.front.points.begin(), f.front.points.end());
  if (all.empty()) throw std::invalid_argument("comparison set has no points");
  for (auto& p : all) p.lifted = false;
  combined_ = nondominated_front(all, FrontKind::actual);
  if (reference) {
    reference_ = *reference;
  } else {
    reference_ = {std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
    for (const auto& p : all) {
      reference_[0] = std::min(reference_[0], p.value[0]);
      reference_[1] = std::min(reference_[1], p.value[1]);
    }
  }
  combined_hv_ = hypervolume(combined_, reference_);
}

double contribution(const ParetoFront& front, const ComparisonSet& cmp) {
  std::vector<Vec2> kept;
  for (const auto& p : front.points) {
    const bool beaten = std::any_of(cmp.combined().points.begin(), cmp.combined().points.end(),
                                    [&](const FrontPoint& q) { return q.value != p.value && dominates(q.value, p.value); });
    if (!beaten) kept.push_back(p.value);
  }
  if (kept.empty()) return 0.0;
  const double total = cmp.combined_hypervolume();
  if (!(total > 0.0)) return 1.0;
  return std::min(1.0, staircase_area(kept, cmp.reference()) / total);
}

DiversityGrid::DiversityGrid(const Vec2& ideal, const Vec2& nadir, std::size_t div)
    : ideal_(ideal), nadir_(nadir), div_(div) {
  if (div == 0) throw std::invalid_argument("diversity grid needs at least one division");
  const double n = static_cast<double>(div);
  for (std::size_t i = 0; i < 2; ++i) {
    if (!(ideal[i] > nadir[i]))
      throw std::domain_error("diversity grid bounds are degenerate along objective " + std::to_string(i + 1));
    const double ip = -ideal[i];
    const double np = -nadir[i];
    lb_[i] = ip;
    ub_[i] = np + (np - ip) / (2.0 * n);
    d_[i] = (ub_[i] - lb_[i]) / n;
  }
}

DiversityGrid DiversityGrid::from(const ComparisonSet& cmp, std::size_t div) {
  Vec2 hi{-std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  Vec2 lo{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
  for (const auto& p : cmp.combined().points) {
    for (std::size_t i = 0; i < 2; ++i) {
      hi[i] = std::max(hi[i], p.value[i]);
      lo[i] = std::min(lo[i], p.value[i]);
    }
  }
  return DiversityGrid(hi, lo, div);
}

std::array<std::size_t, 2> DiversityGrid::box(const Vec2& p) const {
  std::array<std::size_t, 2> idx{};
  const double top = static_cast<double>(div_ - 1);
  for (std::size_t i = 0; i < 2; ++i) {
    const double raw = std::floor((-p[i] - lb_[i]) / d_[i]);
    idx[i] = static_cast<std::size_t>(std::clamp(raw, 0.0, top));
  }
  return idx;
}

double diversity(std::span<const Vec2> points, const DiversityGrid& grid) {
  const std::size_t div = grid.divisions();
  std::vector<char> occupied(div * div, 0);
  for (const auto& p : points) {
    const auto b = grid.box(p);
    occupied[b[0] * div + b[1]] = 1;
  }
  const auto filled = std::count(occupied.begin(), occupied.end(), 1);
  return static_cast<double>(filled) / static_cast<double>(div * div);
}

CostSummary cost_summary(std::span<const EvaluationRecord> records) {
  CostSummary s;
  for (const auto& r : records) {
    s.total += r.cost;
    ++s.counts.at(r.objective);
  }
  return s;
}

}  // namespace flexibo
