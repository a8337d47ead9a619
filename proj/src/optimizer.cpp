#include "flexibo/optimizer.hpp"

#include <cmath>
#include <fstream>

#include "flexibo/rng.hpp"
#include "run_support.hpp"

namespace flexibo {

std::string_view to_string(StopReason r) {
  switch (r) {
    case StopReason::iterations: return "iterations";
    case StopReason::converged: return "converged";
    case StopReason::exhausted: return "exhausted";
    case StopReason::budget: return "budget";
  }
  return "unknown";
}

std::size_t RunResult::count(std::size_t objective) const {
  std::size_t n = 0;
  for (const auto& r : records) n += r.objective == objective;
  return n;
}

nlohmann::json OptimizerState::to_json() const {
  nlohmann::json recs = nlohmann::json::array();
  for (const auto& r : records) {
    recs.push_back({{"flat_id", r.flat_id},
                    {"objective", r.objective + 1},
                    {"value", r.value},
                    {"cost", r.cost},
                    {"iteration", r.iteration},
                    {"wall_s", r.wall_seconds}});
  }
  nlohmann::json masks = nlohmann::json::array();
  for (std::size_t id : evaluated) masks.push_back({id, mask[id][0], mask[id][1]});
  return {{"schema_version", 1},
          {"kind", "checkpoint"},
          {"method", method},
          {"t", t},
          {"seed", seed},
          {"evaluated", evaluated},
          {"mask", masks},
          {"undominated", undominated},
          {"volume", volume ? nlohmann::json(*volume) : nlohmann::json(nullptr)},
          {"cumulative_cost", cumulative_cost},
          {"records", recs}};
}

namespace detail {

Ledger::Ledger(const Oracle& oracle, const RunSettings& settings, std::string method)
    : oracle_(oracle),
      settings_(settings),
      method_(std::move(method)),
      mask_(oracle.space().size(), {false, false}),
      values_(oracle.space().size(), {0.0, 0.0}),
      start_(std::chrono::steady_clock::now()) {}

double Ledger::evaluate(std::size_t id, std::size_t k, std::size_t t) {
  if (mask_.at(id)[k]) throw std::logic_error("pair evaluated twice");
  current_t_ = t;
  Evaluation e;
  try {
    e = oracle_.evaluate(id, k);
  } catch (const std::exception& ex) {
    auto doc = state(t).to_json();
    write_checkpoint(doc);
    throw OracleFailure(std::string("oracle failed on point ") + std::to_string(id) + ", objective " +
                            std::to_string(k + 1) + ": " + ex.what(),
                        std::move(doc));
  }
  const double cost = settings_.costs.psi(k);
  mask_[id][k] = true;
  values_[id][k] = e.value;
  cumulative_ += cost;
  ++counts_[k];
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  records_.push_back(EvaluationRecord{id, k, e.value, cost, t, wall});
  return e.value;
}

void Ledger::initialize() {
  const std::size_t k = std::min(settings_.init_k, size());
  for (const auto& p : sample_random(oracle_.space(), k, settings_.seed)) {
    evaluate(p.flat_id, 0, 0);
    evaluate(p.flat_id, 1, 0);
  }
}

bool Ledger::over_budget() const { return settings_.budget && cumulative_ > *settings_.budget; }

std::vector<Observation> Ledger::observations() const {
  std::vector<Observation> out;
  out.reserve(records_.size());
  for (const auto& r : records_) out.push_back(Observation{r.flat_id, r.objective, r.value});
  return out;
}

std::vector<std::size_t> Ledger::training_ids(std::size_t k) const {
  std::vector<std::size_t> ids;
  for (const auto& r : records_)
    if (r.objective == k) ids.push_back(r.flat_id);
  return ids;
}

ParetoFront Ledger::actual_front() const {
  std::vector<FrontPoint> pts;
  for (std::size_t id = 0; id < size(); ++id)
    if (fully_evaluated(id)) pts.push_back(FrontPoint{id, values_[id], false});
  return nondominated_front(pts, FrontKind::actual);
}

std::optional<double> Ledger::hypervolume() const {
  if (!settings_.reference) return std::nullopt;
  return flexibo::hypervolume(actual_front(), *settings_.reference);
}

OptimizerState Ledger::state(std::size_t t, std::size_t undominated, std::optional<double> volume) const {
  OptimizerState s;
  s.method = method_;
  s.t = t;
  s.seed = settings_.seed;
  for (std::size_t id = 0; id < size(); ++id)
    if (touched(id)) s.evaluated.push_back(id);
  s.mask = mask_;
  s.undominated = undominated;
  s.volume = volume;
  s.cumulative_cost = cumulative_;
  s.records = records_;
  return s;
}

void Ledger::write_checkpoint(const nlohmann::json& doc) const {
  if (settings_.checkpoint_path.empty()) return;
  const auto tmp = settings_.checkpoint_path.string() + ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) return;
    out << doc.dump(1) << '\n';
  }
  std::error_code ec;
  std::filesystem::rename(tmp, settings_.checkpoint_path, ec);
}

void Ledger::maybe_checkpoint(std::size_t t, std::size_t undominated, std::optional<double> volume) const {
  if (settings_.checkpoint_path.empty() || settings_.checkpoint_every == 0) return;
  if (t % settings_.checkpoint_every != 0) return;
  write_checkpoint(state(t, undominated, volume).to_json());
}

IterationTrace Ledger::trace_entry(std::size_t t, std::size_t id, std::vector<std::size_t> objectives,
                                   double cost_before) const {
  IterationTrace tr;
  tr.t = t;
  tr.flat_id = id;
  for (auto k : objectives) tr.values.push_back(values_[id][k]);
  tr.objectives = std::move(objectives);
  tr.cost = cumulative_ - cost_before;
  tr.cumulative_cost = cumulative_;
  tr.hypervolume = hypervolume();
  return tr;
}

RunResult Ledger::finish(std::vector<IterationTrace> trace, StopReason stop) const {
  RunResult r;
  r.method = method_;
  r.records = records_;
  r.trace = std::move(trace);
  r.actual_front = actual_front();
  r.total_cost = cumulative_;
  r.stop = stop;
  return r;
}

ModelBank::ModelBank(const Oracle& oracle, const RunSettings& settings) : settings_(settings) {
  const auto& space = oracle.space();
  design_.resize(static_cast<Eigen::Index>(space.size()), static_cast<Eigen::Index>(space.dimensions()));
  for (std::size_t id = 0; id < space.size(); ++id) {
    const auto x = space.encode(id);
    for (std::size_t d = 0; d < x.size(); ++d)
      design_(static_cast<Eigen::Index>(id), static_cast<Eigen::Index>(d)) = x[d];
  }
  KernelParams p = KernelParams::defaults(space.dimensions());
  std::fill(p.length_scales.begin(), p.length_scales.end(), settings.model.length_scale);
  p.signal_variance = settings.model.signal_variance;
  p.noise_variance = settings.model.noise_variance;
  params_ = {p, p};
}

void ModelBank::predict_objective(const Ledger& ledger, std::size_t k, std::size_t t, std::span<Prediction> out) {
  const auto ids = ledger.training_ids(k);
  const auto n = static_cast<Eigen::Index>(ids.size());
  if (n == 0) {
    const double prior_std = std::sqrt(settings_.model.signal_variance);
    std::fill(out.begin(), out.end(), Prediction{0.0, prior_std});
    return;
  }
  Eigen::MatrixXd X(n, design_.cols());
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    X.row(i) = design_.row(static_cast<Eigen::Index>(ids[static_cast<std::size_t>(i)]));
    y(i) = ledger.value(ids[static_cast<std::size_t>(i)], k);
  }
  const double mu = y.mean();
  double sd = n > 1 ? std::sqrt((y.array() - mu).square().sum() / static_cast<double>(n)) : 0.0;
  if (!(sd > 0.0)) sd = 1.0;
  const Eigen::VectorXd ys = (y.array() - mu) / sd;

  if (settings_.surrogate == SurrogateKind::gp) {
    const auto refresh = settings_.model.refresh_every;
    if (refresh > 0 && (t - 1) % refresh == 0) params_[k] = select_hyperparameters(X, ys, params_[k]);
    const auto gp = GaussianProcess::fit(X, ys, params_[k]);
    gp.predict_batch(design_, out, settings_.exec);
  } else {
    const auto rf = RandomForest::fit(X, ys, settings_.model.forest, mix_seed(settings_.seed, t * 2 + k));
    rf.predict_batch(design_, out, settings_.exec);
  }
  for (auto& p : out) {
    p.mean = p.mean * sd + mu;
    p.std *= sd;
  }
}

std::vector<PointPrediction> ModelBank::predict_all(const Ledger& ledger, std::size_t t) {
  const auto size = static_cast<std::size_t>(design_.rows());
  std::vector<PointPrediction> preds(size);
  std::vector<Prediction> column(size);
  for (std::size_t k = 0; k < 2; ++k) {
    predict_objective(ledger, k, t, column);
    for (std::size_t i = 0; i < size; ++i) preds[i][k] = column[i];
  }
  const auto obs = ledger.observations();
  posterior_override(preds, obs);
  return preds;
}

}  // namespace detail

namespace {

struct RegionState {
  std::vector<UncertaintyRegion> all;
  std::vector<UncertaintyRegion> candidates;  // U_t
  Fronts fronts;
  Vec2 origin{};
  double volume = 0.0;
  double beta_t = 0.0;
};

RegionState model_regions(detail::ModelBank& models, const detail::Ledger& ledger, const RunSettings& settings,
                          std::size_t t) {
  RegionState s;
  const auto preds = models.predict_all(ledger, t);
  s.beta_t = beta(t, BetaSchedule{2, ledger.size(), settings.delta});
  s.all = regions(preds, s.beta_t, ledger.masks());
  for (auto id : undominated_set(s.all)) s.candidates.push_back(s.all[id]);
  s.fronts = build_fronts(s.candidates);
  s.origin = lower_corner(s.candidates);
  s.volume = region_volume(s.fronts, s.origin);
  return s;
}

}  // namespace

RunResult flexibo_run(const Oracle& oracle, const RunSettings& settings) {
  const std::string method = settings.surrogate == SurrogateKind::gp ? "flexibo-gp" : "flexibo-rf";
  detail::Ledger ledger(oracle, settings, method);
  detail::ModelBank models(oracle, settings);
  ledger.initialize();

  std::vector<IterationTrace> trace;
  StopReason stop = StopReason::iterations;
  std::size_t t = 1;
  for (; t <= settings.iterations; ++t) {
    if (ledger.over_budget()) {
      stop = StopReason::budget;
      break;
    }
    auto s = model_regions(models, ledger, settings, t);
    const auto owners = front_owners(s.fronts);
    auto scores = volume_change_per_cost(s.candidates, owners, s.volume, s.origin, settings.costs, settings.exec);
    const auto choice = select_next(scores);
    if (!choice) {
      stop = ledger.pairs_left() == 0 ? StopReason::exhausted : StopReason::converged;
      break;
    }
    const double before = ledger.cumulative();
    ledger.evaluate(choice->point, choice->objective, t);
    auto entry = ledger.trace_entry(t, choice->point, {choice->objective}, before);
    entry.volume = s.volume;
    entry.beta = s.beta_t;
    entry.undominated = s.candidates.size();
    entry.pess_size = s.fronts.pess.points.size();
    entry.opt_size = s.fronts.opt.points.size();
    if (settings.record_scores) entry.scores = std::move(scores);
    trace.push_back(std::move(entry));
    ledger.maybe_checkpoint(t, s.candidates.size(), s.volume);
  }

  auto final_state = model_regions(models, ledger, settings, t);
  auto result = ledger.finish(std::move(trace), stop);
  result.region = make_region(std::move(final_state.fronts), final_state.origin);
  return result;
}

}  // namespace flexibo
