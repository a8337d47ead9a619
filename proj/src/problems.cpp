#include "flexibo/problems.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "flexibo/rng.hpp"

namespace flexibo {

namespace {

constexpr std::size_t kNoiseDraws = 10;

OptionDef numeric_option(std::string name, std::size_t count, double lo = 0.0, double hi = 1.0) {
  OptionDef o{std::move(name), {}};
  for (std::size_t i = 0; i < count; ++i)
    o.values.emplace_back(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1));
  return o;
}

OptionDef label_option(std::string name, std::vector<std::string> labels) {
  OptionDef o{std::move(name), {}};
  for (auto& l : labels) o.values.emplace_back(std::move(l));
  return o;
}

std::unique_ptr<SyntheticProblem> concave() {
  DesignSpace space({numeric_option("angle", 40), numeric_option("slack", 25)});
  auto f1 = [](std::span<const double> x, const DesignPoint&) {
    return (1.0 - 0.5 * x[1]) * std::cos(0.5 * std::numbers::pi * x[0]);
  };
  auto f2 = [](std::span<const double> x, const DesignPoint&) {
    return (1.0 - 0.5 * x[1]) * std::sin(0.5 * std::numbers::pi * x[0]);
  };
  auto p = std::make_unique<SyntheticProblem>(
      "concave", "quarter-circle front at slack = 0, both maximized", std::move(space),
      std::array<ObjectiveSpec, 2>{ObjectiveSpec{"f1", Direction::maximize, ""},
                                   ObjectiveSpec{"f2", Direction::maximize, ""}},
      std::array<ObjectiveFn, 2>{f1, f2});
  std::vector<std::size_t> front;
  for (std::size_t i = 0; i < 40; ++i) front.push_back(p->space().flat_id(std::vector<std::size_t>{i, 0}));
  p->set_analytic_front(std::move(front));
  return p;
}

std::unique_ptr<SyntheticProblem> convex() {
  DesignSpace space({numeric_option("x1", 40), numeric_option("x2", 5), numeric_option("x3", 5)});
  auto g = [](std::span<const double> x) { return 1.0 + 4.5 * (x[1] + x[2]); };
  auto f1 = [](std::span<const double> x, const DesignPoint&) { return x[0]; };
  auto f2 = [g](std::span<const double> x, const DesignPoint&) {
    const double gx = g(x);
    return gx * (1.0 - std::sqrt(x[0] / gx));
  };
  auto p = std::make_unique<SyntheticProblem>(
      "convex", "convex front at x2 = x3 = 0, both minimized", std::move(space),
      std::array<ObjectiveSpec, 2>{ObjectiveSpec{"f1", Direction::minimize, ""},
                                   ObjectiveSpec{"f2", Direction::minimize, ""}},
      std::array<ObjectiveFn, 2>{f1, f2});
  std::vector<std::size_t> front;
  for (std::size_t i = 0; i < 40; ++i) front.push_back(p->space().flat_id(std::vector<std::size_t>{i, 0, 0}));
  p->set_analytic_front(std::move(front));
  return p;
}

// Throughput falls off a cliff outside the "fast" mode, so the good
// configurations are a small island in a mostly poor grid.
std::unique_ptr<SyntheticProblem> cliff() {
  DesignSpace space({numeric_option("batch", 20), numeric_option("depth", 10),
                     label_option("mode", {"fast", "safe", "legacy", "debug", "trace"})});
  auto f1 = [](std::span<const double> x, const DesignPoint& p) {
    const double base = (0.5 + 0.5 * x[0]) * (1.0 - 0.6 * x[1] * x[1]);
    return p.indices[2] == 0 ? base : 0.15 * base;
  };
  auto f2 = [](std::span<const double> x, const DesignPoint&) {
    return 0.8 * x[1] + 0.2 * (1.0 - x[0]) + 0.1 * x[2];
  };
  return std::make_unique<SyntheticProblem>(
      "cliff", "throughput collapses outside one mode, both maximized", std::move(space),
      std::array<ObjectiveSpec, 2>{ObjectiveSpec{"throughput", Direction::maximize, "ops/s"},
                                   ObjectiveSpec{"quality", Direction::maximize, ""}},
      std::array<ObjectiveFn, 2>{f1, f2});
}

// Frequency changes energy only; model size trades energy for accuracy.
std::unique_ptr<SyntheticProblem> cheap_dim() {
  DesignSpace space({numeric_option("frequency", 10, 0.3, 2.0), numeric_option("filters", 10),
                     numeric_option("kernel", 10)});
  auto energy = [](std::span<const double> x, const DesignPoint&) {
    const double f = x[0] - 0.4;
    const double work = 0.5 + x[1] + 0.5 * x[2] * x[2];
    return (0.4 + f * f) * work;
  };
  auto accuracy = [](std::span<const double> x, const DesignPoint&) {
    return 1.0 - std::exp(-2.0 * (0.7 * x[1] + 0.3 * x[2]) - 0.2);
  };
  return std::make_unique<SyntheticProblem>(
      "cheap-dim", "frequency affects only the cheap energy objective", std::move(space),
      std::array<ObjectiveSpec, 2>{ObjectiveSpec{"energy", Direction::minimize, "J"},
                                   ObjectiveSpec{"accuracy", Direction::maximize, ""}},
      std::array<ObjectiveFn, 2>{energy, accuracy});
}

}  // namespace

SyntheticProblem::SyntheticProblem(std::string name, std::string summary, DesignSpace space,
                                   std::array<ObjectiveSpec, 2> objectives, std::array<ObjectiveFn, 2> fns,
                                   std::array<double, 2> theta)
    : name_(std::move(name)),
      summary_(std::move(summary)),
      space_(std::move(space)),
      objectives_(std::move(objectives)),
      fns_(std::move(fns)),
      theta_(theta),
      encoded_(space_.encode_all()) {}

void SyntheticProblem::set_noise(double std_dev, std::uint64_t seed) {
  if (!(std_dev >= 0.0)) throw std::invalid_argument("noise standard deviation must be >= 0");
  noise_std_ = std_dev;
  noise_seed_ = seed;
}

Evaluation SyntheticProblem::evaluate(std::size_t flat_id, std::size_t objective) const {
  if (flat_id >= space_.size()) throw std::out_of_range("flat id outside the design space");
  if (objective > 1) throw std::out_of_range("objective index must be 0 or 1");
  double v = fns_[objective](encoded_[flat_id], space_.point(flat_id));
  if (noise_std_ > 0.0) {
    Rng rng(mix_seed(mix_seed(noise_seed_, flat_id), objective));
    std::array<double, kNoiseDraws> draws{};
    for (auto& d : draws) d = v + noise_std_ * standard_normal(rng);
    std::sort(draws.begin(), draws.end());
    v = 0.5 * (draws[kNoiseDraws / 2 - 1] + draws[kNoiseDraws / 2]);
  }
  return Evaluation{objectives_[objective].to_internal(v), theta_[objective]};
}

std::vector<Vec2> SyntheticProblem::all_values() const {
  std::vector<Vec2> out(space_.size());
  for (std::size_t id = 0; id < out.size(); ++id) out[id] = {evaluate(id, 0).value, evaluate(id, 1).value};
  return out;
}

ParetoFront SyntheticProblem::true_front() const {
  const auto values = all_values();
  std::vector<FrontPoint> pts;
  pts.reserve(values.size());
  for (std::size_t id = 0; id < values.size(); ++id) pts.push_back(FrontPoint{id, values[id], false});
  return nondominated_front(pts, FrontKind::actual);
}

Vec2 SyntheticProblem::reference() const {
  Vec2 lo{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
  for (const auto& v : all_values()) {
    lo[0] = std::min(lo[0], v[0]);
    lo[1] = std::min(lo[1], v[1]);
  }
  return lo;
}

std::vector<std::string> builtin_problem_names() { return {"concave", "convex", "cliff", "cheap-dim"}; }

std::unique_ptr<SyntheticProblem> make_problem(std::string_view name) {
  if (name == "concave") return concave();
  if (name == "convex") return convex();
  if (name == "cliff") return cliff();
  if (name == "cheap-dim") return cheap_dim();
  throw std::invalid_argument("unknown problem '" + std::string(name) + "'");
}

std::vector<std::unique_ptr<SyntheticProblem>> builtin_problems() {
  std::vector<std::unique_ptr<SyntheticProblem>> out;
  for (const auto& n : builtin_problem_names()) out.push_back(make_problem(n));
  return out;
}

}  // namespace flexibo
