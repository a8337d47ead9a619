#include "flexibo/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <functional>
#include <map>
#include <memory>
#include <set>
#include <thread>

#include "flexibo/metrics.hpp"
#include "flexibo/problems.hpp"

namespace flexibo {

namespace {

void run_pool(std::size_t tasks, std::size_t jobs, const std::function<void(std::size_t)>& fn) {
  const std::size_t workers = std::max<std::size_t>(1, std::min(jobs, tasks));
  if (workers == 1) {
    for (std::size_t i = 0; i < tasks; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  for (std::size_t w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < tasks; i = next++) fn(i);
    });
}

RunResult dispatch(const std::string& method, const Oracle& oracle, const RunSettings& s) {
  if (method == "flexibo-gp" || method == "flexibo-rf") {
    RunSettings f = s;
    f.surrogate = method == "flexibo-gp" ? SurrogateKind::gp : SurrogateKind::rf;
    return flexibo_run(oracle, f);
  }
  if (method == "pal") return pal_run(oracle, s);
  if (method == "rs") return rs_run(oracle, s);
  if (method == "sobo-1" || method == "sobo-2") {
    RunSettings g = s;
    g.surrogate = SurrogateKind::gp;
    return sobo_run(oracle, method == "sobo-1" ? 0 : 1, g);
  }
  throw std::invalid_argument("unknown method '" + method + "'");
}

RunSummary summarize(const std::string& problem, const SyntheticProblem& oracle, const CellResult& cell,
                     const Vec2& reference, double wall) {
  const auto& r = cell.result;
  RunSummary s;
  s.problem = problem;
  s.method = cell.method;
  s.seed = cell.seed;
  s.mode = cell.mode;
  s.objectives = oracle.objectives();
  s.reference = reference;
  s.iterations = r.trace.size();
  s.stop = std::string(to_string(r.stop));
  const auto cost = cost_summary(r.records);
  s.total_cost = cost.total;
  s.counts = cost.counts;
  s.hypervolume = hypervolume(r.actual_front, reference);
  if (r.region) s.final_volume = r.region->volume;
  for (const auto& p : r.actual_front.points)
    s.front.push_back({p.owner, {oracle.objectives()[0].to_reported(p.value[0]),
                                 oracle.objectives()[1].to_reported(p.value[1])}});
  s.best_point = r.best_point;
  s.wall_time = wall;
  return s;
}

std::string jsonl(const std::vector<TraceLine>& lines) {
  std::string out;
  for (const auto& l : lines) out += l.to_json().dump() + '\n';
  return out;
}

}  // namespace

const std::vector<std::string>& known_methods() {
  static const std::vector<std::string> names{"flexibo-gp", "flexibo-rf", "pal", "rs", "sobo-1", "sobo-2"};
  return names;
}

bool is_flexibo(std::string_view method) { return method == "flexibo-gp" || method == "flexibo-rf"; }

BudgetReference read_budget(const std::filesystem::path& path, const CostModel& costs) {
  auto file = path;
  if (std::filesystem::is_directory(file)) file /= "summary_fcm.json";
  const auto s = RunSummary::from_json(read_json_file(file));
  return BudgetReference{s.total_cost, s.counts[costs.expensive()]};
}

bool ExperimentResult::ok() const {
  return std::all_of(cells.begin(), cells.end(), [](const CellResult& c) { return c.error.empty(); });
}

const CellResult* ExperimentResult::find(std::string_view method, std::uint64_t seed, Mode mode) const {
  for (const auto& c : cells)
    if (c.method == method && c.seed == seed && c.mode == mode) return &c;
  return nullptr;
}

void validate_manifest(const RunManifest& m) {
  if (m.methods.empty()) throw std::invalid_argument("no methods requested");
  std::set<std::string> seen;
  for (const auto& name : m.methods) {
    if (std::find(known_methods().begin(), known_methods().end(), name) == known_methods().end())
      throw std::invalid_argument("unknown method '" + name + "'");
    if (!seen.insert(name).second) throw std::invalid_argument("duplicate method '" + name + "'");
  }
  if (m.seeds.empty()) throw std::invalid_argument("no seeds requested");
  if (std::set<std::uint64_t>(m.seeds.begin(), m.seeds.end()).size() != m.seeds.size())
    throw std::invalid_argument("duplicate seeds");
  if (m.modes.empty()) throw std::invalid_argument("no modes requested");
  if (m.jobs < 1) throw std::invalid_argument("jobs must be >= 1");
  const bool tbm = std::find(m.modes.begin(), m.modes.end(), Mode::tbm) != m.modes.end();
  const bool has_flexibo = std::any_of(m.methods.begin(), m.methods.end(), [](const auto& n) { return is_flexibo(n); });
  if (tbm && !has_flexibo && !m.budget_from)
    throw std::invalid_argument("time-budget mode needs a FlexiBO method or a budget reference");
}

ExperimentResult run_experiment(const RunManifest& m) {
  validate_manifest(m);

  // One oracle per seed so noise streams follow the run seed.
  std::map<std::uint64_t, std::unique_ptr<SyntheticProblem>> oracles;
  std::map<std::uint64_t, Vec2> references;
  for (auto seed : m.seeds) {
    auto p = make_problem(m.problem);
    if (m.noise_std > 0.0) p->set_noise(m.noise_std, seed);
    references[seed] = p->reference();
    oracles[seed] = std::move(p);
  }
  std::optional<BudgetReference> external;
  if (m.budget_from) external = read_budget(*m.budget_from, m.settings.costs);

  RunSettings base = m.settings;
  if (m.jobs > 1) base.exec = Execution::serial;

  struct Cell {
    std::string method;
    std::uint64_t seed;
    Mode mode;
    CellResult out;
  };
  std::vector<Cell> flex, rest;
  for (const auto& name : m.methods) {
    for (auto seed : m.seeds) {
      if (is_flexibo(name)) {
        flex.push_back({name, seed, Mode::fcm, {}});
      } else {
        for (auto mode : m.modes) rest.push_back({name, seed, mode, {}});
      }
    }
  }

  auto execute = [&](Cell& c, const RunSettings& s) {
    c.out.method = c.method;
    c.out.seed = c.seed;
    c.out.mode = c.mode;
    const auto start = std::chrono::steady_clock::now();
    try {
      RunSettings local = s;
      if (!m.out.empty()) {
        const auto dir = run_directory(m.out, m.problem, c.method, c.seed);
        std::filesystem::create_directories(dir);
        local.checkpoint_path = dir / ("checkpoint_" + std::string(to_string(c.mode)) + ".json");
      }
      c.out.result = dispatch(c.method, *oracles.at(c.seed), local);
      const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      c.out.summary = summarize(m.problem, *oracles.at(c.seed), c.out, references.at(c.seed), wall);
    } catch (const std::exception& e) {
      c.out.error = e.what();
    }
  };

  auto settings_for = [&](std::uint64_t seed) {
    RunSettings s = base;
    s.seed = seed;
    s.reference = references.at(seed);
    return s;
  };

  run_pool(flex.size(), m.jobs, [&](std::size_t i) { execute(flex[i], settings_for(flex[i].seed)); });

  // The budget and cap for each seed come from that seed's FlexiBO run,
  // preferring the GP variant.
  std::map<std::uint64_t, BudgetReference> budgets;
  for (const char* pref : {"flexibo-rf", "flexibo-gp"}) {
    for (const auto& c : flex)
      if (c.method == pref && c.out.error.empty())
        budgets[c.seed] = BudgetReference{c.out.result.total_cost, c.out.result.count(m.settings.costs.expensive())};
  }
  auto budget_for = [&](std::uint64_t seed) -> std::optional<BudgetReference> {
    if (auto it = budgets.find(seed); it != budgets.end()) return it->second;
    return external;
  };

  const std::size_t pair_bound = 2 * oracles.begin()->second->space().size();
  run_pool(rest.size(), m.jobs, [&](std::size_t i) {
    auto& c = rest[i];
    RunSettings s = settings_for(c.seed);
    const auto ref = budget_for(c.seed);
    if (c.method == "rs" && ref) s.expensive_cap = ref->expensive_count;
    if (c.mode == Mode::tbm) {
      if (!ref) {
        c.out = CellResult{c.method, c.seed, c.mode, {}, {}, "no FlexiBO budget available for this seed"};
        return;
      }
      s.budget = ref->cost;
      s.iterations = pair_bound;
    }
    execute(c, s);
    if (c.out.error.empty()) {
      if (s.budget) c.out.summary.budget = s.budget;
      c.out.summary.expensive_cap = s.expensive_cap;
    }
  });

  ExperimentResult result;
  for (auto mode : m.modes) {
    for (const auto& name : m.methods) {
      for (auto seed : m.seeds) {
        if (is_flexibo(name)) {
          auto it = std::find_if(flex.begin(), flex.end(),
                                 [&](const Cell& c) { return c.method == name && c.seed == seed; });
          CellResult copy = it->out;
          copy.mode = mode;
          copy.summary.mode = mode;
          if (mode == Mode::tbm && copy.error.empty()) copy.summary.budget = copy.result.total_cost;
          result.cells.push_back(std::move(copy));
        } else {
          auto it = std::find_if(rest.begin(), rest.end(), [&](const Cell& c) {
            return c.method == name && c.seed == seed && c.mode == mode;
          });
          result.cells.push_back(it->out);
        }
      }
    }
  }

  // Contribution and diversity against the union of all methods' fronts
  // for the same seed and mode.
  for (auto mode : m.modes) {
    for (auto seed : m.seeds) {
      std::vector<CellResult*> group;
      std::vector<NamedFront> fronts;
      for (auto& c : result.cells) {
        if (c.mode != mode || c.seed != seed || !c.error.empty()) continue;
        group.push_back(&c);
        fronts.push_back({c.method, c.result.actual_front});
      }
      const bool any = std::any_of(fronts.begin(), fronts.end(), [](const NamedFront& f) { return !f.front.empty(); });
      if (!any) continue;
      const ComparisonSet cmp(fronts, references.at(seed));
      std::optional<DiversityGrid> grid;
      try {
        grid = DiversityGrid::from(cmp, m.div);
      } catch (const std::domain_error&) {
      }
      for (auto* c : group) {
        c->summary.contribution = contribution(c->result.actual_front, cmp);
        if (grid) c->summary.diversity = diversity(c->result.actual_front, *grid);
      }
    }
  }

  if (!m.out.empty()) {
    std::string csv = csv_header() + '\n';
    std::string lines;
    for (auto& c : result.cells) {
      if (!c.error.empty()) continue;
      const auto dir = run_directory(m.out, m.problem, c.method, c.seed);
      const auto tag = std::string(to_string(c.mode));
      try {
        write_text_file(dir / ("trace_" + tag + ".jsonl"),
                        jsonl(trace_lines(c.result, oracles.at(c.seed)->objectives())));
        write_text_file(dir / ("summary_" + tag + ".json"), c.summary.to_json().dump(2) + '\n');
      } catch (const std::exception& e) {
        c.error = e.what();
        continue;
      }
      csv += csv_row(c.summary) + '\n';
      lines += c.summary.to_json().dump() + '\n';
    }
    write_text_file(m.out / m.problem / "summary.csv", csv);
    write_text_file(m.out / m.problem / "summary.jsonl", lines);
  }
  return result;
}

}  // namespace flexibo
