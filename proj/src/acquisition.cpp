#include "flexibo/acquisition.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <unordered_map>

namespace flexibo {

double beta(std::size_t t, const BetaSchedule& schedule) {
  if (t < 1) throw std::domain_error("beta schedule starts at t = 1");
  if (!(schedule.delta > 0.0 && schedule.delta < 1.0)) throw std::domain_error("delta must lie in (0, 1)");
  const double td = static_cast<double>(t);
  const double arg = static_cast<double>(schedule.objectives) * static_cast<double>(schedule.space_size) *
                     std::numbers::pi * std::numbers::pi * td * td / (6.0 * schedule.delta);
  if (!(arg > 1.0)) throw std::domain_error("beta log argument must exceed 1");
  return std::sqrt(2.0 * std::log(arg)) / 3.0;
}

std::vector<UncertaintyRegion> regions(std::span<const PointPrediction> predictions, double beta_t,
                                       std::span<const std::array<bool, 2>> measured) {
  if (!(beta_t > 0.0)) throw std::domain_error("beta_t must be positive");
  if (!measured.empty() && measured.size() != predictions.size())
    throw std::invalid_argument("measured mask size does not match predictions");
  const double scale = std::sqrt(beta_t);
  std::vector<UncertaintyRegion> out(predictions.size());
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    auto& r = out[i];
    r.owner = i;
    for (std::size_t k = 0; k < 2; ++k) {
      const auto& p = predictions[i][k];
      r.pess[k] = p.mean - scale * p.std;
      r.opt[k] = p.mean + scale * p.std;
    }
    if (!measured.empty()) r.measured = measured[i];
  }
  return out;
}

std::vector<std::size_t> front_owners(const Fronts& fronts) {
  std::vector<std::size_t> owners = fronts.pess.owners();
  const auto opt = fronts.opt.owners();
  owners.insert(owners.end(), opt.begin(), opt.end());
  std::sort(owners.begin(), owners.end());
  owners.erase(std::unique(owners.begin(), owners.end()), owners.end());
  return owners;
}

std::vector<AcquisitionScore> volume_change_per_cost(std::span<const UncertaintyRegion> candidates,
                                                     std::span<const std::size_t> scored_owners,
                                                     double current_volume, const Vec2& origin,
                                                     const CostModel& costs, Execution exec) {
  std::unordered_map<std::size_t, std::size_t> position;
  position.reserve(candidates.size());
  for (std::size_t i = 0; i < candidates.size(); ++i) position.emplace(candidates[i].owner, i);

  struct Task {
    std::size_t pos;
    std::size_t objective;
  };
  std::vector<Task> tasks;
  for (auto owner : scored_owners) {
    auto it = position.find(owner);
    if (it == position.end()) throw std::invalid_argument("scored owner is not among the candidates");
    const auto& r = candidates[it->second];
    if (r.measured[0] && r.measured[1]) continue;
    for (std::size_t k = 0; k < 2; ++k)
      if (!r.measured[k]) tasks.push_back(Task{it->second, k});
  }

  std::vector<AcquisitionScore> scores(tasks.size());
  auto score_one = [&](std::size_t t, std::vector<UncertaintyRegion>& work) {
    const auto [pos, k] = tasks[t];
    const auto& original = candidates[pos];
    const double mid = 0.5 * (original.pess[k] + original.opt[k]);
    work[pos].pess[k] = mid;
    work[pos].opt[k] = mid;
    const double after = region_volume(build_fronts(work), origin);
    work[pos] = original;
    const double dv = std::max(0.0, current_volume - after);
    const double cost = costs.psi(k);
    scores[t] = AcquisitionScore{original.owner, k, dv, cost, dv / cost};
  };

  const auto n = static_cast<std::int64_t>(tasks.size());
  if (exec == Execution::serial) {
    std::vector<UncertaintyRegion> work(candidates.begin(), candidates.end());
    for (std::int64_t t = 0; t < n; ++t) score_one(static_cast<std::size_t>(t), work);
    return scores;
  }
#pragma omp parallel
  {
    std::vector<UncertaintyRegion> work(candidates.begin(), candidates.end());
#pragma omp for schedule(dynamic, 1)
    for (std::int64_t t = 0; t < n; ++t) score_one(static_cast<std::size_t>(t), work);
  }
  return scores;
}

std::optional<AcquisitionScore> select_next(std::span<const AcquisitionScore> scores) {
  if (scores.empty()) return std::nullopt;
  auto better = [](const AcquisitionScore& a, const AcquisitionScore& b) {
    if (a.score != b.score) return a.score > b.score;
    if (a.cost != b.cost) return a.cost < b.cost;
    if (a.point != b.point) return a.point < b.point;
    return a.objective < b.objective;
  };
  return *std::min_element(scores.begin(), scores.end(), better);
}

}  // namespace flexibo
