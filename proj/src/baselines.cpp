#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "flexibo/optimizer.hpp"
#include "flexibo/rng.hpp"
#include "run_support.hpp"

namespace flexibo {

double probability_of_improvement(const Prediction& p, double incumbent) {
  if (!(p.std > 0.0)) return p.mean > incumbent ? 1.0 : 0.0;
  const double z = (p.mean - incumbent) / p.std;
  return 0.5 * std::erfc(-z / std::numbers::sqrt2);
}

double expected_improvement(const Prediction& p, double incumbent) {
  const double gain = p.mean - incumbent;
  if (!(p.std > 0.0)) return std::max(0.0, gain);
  const double z = gain / p.std;
  const double cdf = 0.5 * std::erfc(-z / std::numbers::sqrt2);
  const double pdf = std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
  return gain * cdf + p.std * pdf;
}

namespace {

// Measures whichever objectives of `id` are still missing.
IterationTrace evaluate_both(detail::Ledger& ledger, std::size_t id, std::size_t t) {
  const double before = ledger.cumulative();
  std::vector<std::size_t> objectives;
  for (std::size_t k = 0; k < 2; ++k) {
    if (ledger.evaluated(id, k)) continue;
    ledger.evaluate(id, k, t);
    objectives.push_back(k);
  }
  return ledger.trace_entry(t, id, std::move(objectives), before);
}

enum class PalStatus { undecided, pareto, discarded };

}  // namespace

RunResult pal_run(const Oracle& oracle, const RunSettings& settings) {
  detail::Ledger ledger(oracle, settings, "pal");
  detail::ModelBank models(oracle, settings);
  ledger.initialize();

  const std::size_t n = ledger.size();
  std::vector<PalStatus> status(n, PalStatus::undecided);
  std::vector<IterationTrace> trace;
  StopReason stop = StopReason::iterations;

  for (std::size_t t = 1; t <= settings.iterations; ++t) {
    if (ledger.over_budget()) {
      stop = StopReason::budget;
      break;
    }
    const auto preds = models.predict_all(ledger, t);
    const double beta_t = beta(t, BetaSchedule{2, n, settings.delta});
    const auto regs = regions(preds, beta_t, ledger.masks());

    Vec2 eps{};
    for (std::size_t k = 0; k < 2; ++k) {
      double lo = std::numeric_limits<double>::infinity();
      double hi = -lo;
      for (std::size_t id = 0; id < n; ++id) {
        if (!ledger.evaluated(id, k)) continue;
        lo = std::min(lo, ledger.value(id, k));
        hi = std::max(hi, ledger.value(id, k));
      }
      eps[k] = hi > lo ? settings.epsilon_frac * (hi - lo) : 0.0;
    }

    // Discard points whose best case is epsilon-dominated by the worst case
    // of a point on the pessimistic front of the remaining set.
    std::vector<FrontPoint> pess;
    for (std::size_t id = 0; id < n; ++id)
      if (status[id] != PalStatus::discarded) pess.push_back(FrontPoint{id, regs[id].pess, false});
    const auto pess_front = nondominated_front(pess, FrontKind::pessimistic);
    for (std::size_t id = 0; id < n; ++id) {
      if (status[id] != PalStatus::undecided) continue;
      for (const auto& fp : pess_front.points) {
        if (fp.owner == id || status[fp.owner] == PalStatus::discarded) continue;
        const Vec2 lifted{fp.value[0] + eps[0], fp.value[1] + eps[1]};
        if (dominates(lifted, regs[id].opt)) {
          status[id] = PalStatus::discarded;
          break;
        }
      }
    }

    // Classify as Pareto-optimal when no other remaining point can beat the
    // worst case by more than epsilon.
    for (std::size_t id = 0; id < n; ++id) {
      if (status[id] != PalStatus::undecided) continue;
      const Vec2 floor{regs[id].pess[0] + eps[0], regs[id].pess[1] + eps[1]};
      bool beaten = false;
      for (std::size_t other = 0; other < n && !beaten; ++other) {
        if (other == id || status[other] == PalStatus::discarded) continue;
        beaten = dominates(regs[other].opt, floor);
      }
      if (!beaten) status[id] = PalStatus::pareto;
    }

    if (std::none_of(status.begin(), status.end(), [](PalStatus s) { return s == PalStatus::undecided; })) {
      stop = StopReason::converged;
      break;
    }

    std::optional<std::size_t> pick;
    double widest = -1.0;
    for (std::size_t id = 0; id < n; ++id) {
      if (status[id] != PalStatus::undecided || ledger.fully_evaluated(id)) continue;
      const double d0 = regs[id].opt[0] - regs[id].pess[0];
      const double d1 = regs[id].opt[1] - regs[id].pess[1];
      const double diag = d0 * d0 + d1 * d1;
      if (diag > widest) {
        widest = diag;
        pick = id;
      }
    }
    if (!pick) {
      stop = ledger.pairs_left() == 0 ? StopReason::exhausted : StopReason::converged;
      break;
    }
    auto entry = evaluate_both(ledger, *pick, t);
    entry.beta = beta_t;
    entry.undominated = static_cast<std::size_t>(
        std::count(status.begin(), status.end(), PalStatus::undecided));
    trace.push_back(std::move(entry));
    ledger.maybe_checkpoint(t);
  }
  return ledger.finish(std::move(trace), stop);
}

RunResult rs_run(const Oracle& oracle, const RunSettings& settings) {
  detail::Ledger ledger(oracle, settings, "rs");
  Rng rng(mix_seed(settings.seed, 0x5253));
  const std::size_t expensive = settings.costs.expensive();

  std::vector<IterationTrace> trace;
  StopReason stop = StopReason::iterations;
  std::vector<std::pair<std::size_t, std::size_t>> open;
  for (std::size_t t = 1; t <= settings.iterations; ++t) {
    if (ledger.over_budget()) {
      stop = StopReason::budget;
      break;
    }
    const bool capped = settings.expensive_cap && ledger.count(expensive) >= *settings.expensive_cap;
    open.clear();
    for (std::size_t id = 0; id < ledger.size(); ++id)
      for (std::size_t k = 0; k < 2; ++k)
        if (!ledger.evaluated(id, k) && !(capped && k == expensive)) open.emplace_back(id, k);
    if (open.empty()) {
      stop = StopReason::exhausted;
      break;
    }
    const auto [id, k] = open[uniform_index(rng, open.size())];
    const double before = ledger.cumulative();
    ledger.evaluate(id, k, t);
    trace.push_back(ledger.trace_entry(t, id, {k}, before));
    ledger.maybe_checkpoint(t);
  }
  return ledger.finish(std::move(trace), stop);
}

RunResult sobo_run(const Oracle& oracle, std::size_t target, const RunSettings& settings) {
  if (target > 1) throw std::invalid_argument("target objective must be 0 or 1");
  detail::Ledger ledger(oracle, settings, target == 0 ? "sobo-1" : "sobo-2");
  detail::ModelBank models(oracle, settings);
  ledger.initialize();

  const std::size_t n = ledger.size();
  std::vector<Prediction> preds(n);
  std::vector<IterationTrace> trace;
  StopReason stop = StopReason::iterations;

  auto incumbent = [&]() -> std::optional<std::size_t> {
    std::optional<std::size_t> best;
    for (std::size_t id = 0; id < n; ++id)
      if (ledger.evaluated(id, target) && (!best || ledger.value(id, target) > ledger.value(*best, target)))
        best = id;
    return best;
  };

  for (std::size_t t = 1; t <= settings.iterations; ++t) {
    if (ledger.over_budget()) {
      stop = StopReason::budget;
      break;
    }
    models.predict_objective(ledger, target, t, preds);
    const auto best = incumbent();
    const double f_star = best ? ledger.value(*best, target) : -std::numeric_limits<double>::infinity();

    std::optional<std::size_t> pick;
    double top = -1.0;
    for (std::size_t id = 0; id < n; ++id) {
      if (ledger.evaluated(id, target)) continue;
      const double s = settings.sobo_criterion == ImprovementCriterion::probability
                           ? probability_of_improvement(preds[id], f_star)
                           : expected_improvement(preds[id], f_star);
      if (s > top) {
        top = s;
        pick = id;
      }
    }
    if (!pick) {
      stop = StopReason::exhausted;
      break;
    }
    trace.push_back(evaluate_both(ledger, *pick, t));
    ledger.maybe_checkpoint(t);
  }
  auto result = ledger.finish(std::move(trace), stop);
  result.best_point = incumbent();
  return result;
}

}  // namespace flexibo
