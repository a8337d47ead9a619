#include "flexibo/cli.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <iomanip>
#include <ostream>

#include "flexibo/config.hpp"
#include "flexibo/experiment.hpp"
#include "flexibo/problems.hpp"
#include "flexibo/report.hpp"

namespace flexibo {

namespace {

struct RunFlags {
  std::string problem;
  std::vector<std::string> methods;
  std::string surrogate = "gp";
  std::size_t iters = 0;
  std::uint64_t seed = 0;
  std::size_t seeds = 0;
  std::size_t init_k = 0;
  double theta1 = 0.0;
  double theta2 = 0.0;
  double phi = 0.0;
  double delta = 0.0;
  std::string mode;
  std::string budget_from;
  std::string out;
  std::size_t jobs = 0;
  double noise_std = 0.0;
  std::size_t div = 0;
  std::string config;
};

struct RunOptions {
  CLI::Option* method = nullptr;
  CLI::Option* surrogate = nullptr;
  CLI::Option* iters = nullptr;
  CLI::Option* seed = nullptr;
  CLI::Option* seeds = nullptr;
  CLI::Option* init_k = nullptr;
  CLI::Option* theta1 = nullptr;
  CLI::Option* theta2 = nullptr;
  CLI::Option* phi = nullptr;
  CLI::Option* delta = nullptr;
  CLI::Option* mode = nullptr;
  CLI::Option* budget_from = nullptr;
  CLI::Option* out = nullptr;
  CLI::Option* jobs = nullptr;
  CLI::Option* noise_std = nullptr;
  CLI::Option* div = nullptr;
  CLI::Option* config = nullptr;
};

RunOptions add_run_flags(CLI::App* cmd, RunFlags& f, bool many_methods) {
  RunOptions o;
  cmd->add_option("--problem", f.problem, "built-in problem (see `problems`)")->required();
  if (many_methods) {
    o.method = cmd->add_option("--method", f.methods, "methods to compare (repeat or comma-separate)")
                   ->delimiter(',');
  } else {
    o.method = cmd->add_option("--method", f.methods, "flexibo-gp, flexibo-rf, flexibo, pal, rs, sobo-1, sobo-2")
                   ->required()
                   ->expected(1);
  }
  o.surrogate = cmd->add_option("--surrogate", f.surrogate, "gp or rf (FlexiBO alias and PAL)")
                    ->check(CLI::IsMember({"gp", "rf"}));
  o.iters = cmd->add_option("--iters", f.iters, "iterations T")->check(CLI::PositiveNumber);
  o.seed = cmd->add_option("--seed", f.seed, "first seed");
  o.seeds = cmd->add_option("--seeds", f.seeds, "number of consecutive seeds")->check(CLI::PositiveNumber);
  o.init_k = cmd->add_option("--init-k", f.init_k, "initial design size");
  o.theta1 = cmd->add_option("--cost-theta1", f.theta1, "raw effort of objective 1")->check(CLI::PositiveNumber);
  o.theta2 = cmd->add_option("--cost-theta2", f.theta2, "raw effort of objective 2")->check(CLI::PositiveNumber);
  o.phi = cmd->add_option("--phi", f.phi, "cost balancing factor")->check(CLI::PositiveNumber);
  o.delta = cmd->add_option("--delta", f.delta, "confidence parameter in (0, 1)");
  o.mode = cmd->add_option("--mode", f.mode, "fcm or tbm")->check(CLI::IsMember({"fcm", "tbm"}));
  o.budget_from = cmd->add_option("--budget-from", f.budget_from, "FlexiBO summary supplying the TBM budget");
  o.out = cmd->add_option("--out", f.out, "results root (default $FLEXIBO_OUT or ./results)");
  o.jobs = cmd->add_option("--jobs", f.jobs, "worker threads")->check(CLI::PositiveNumber);
  o.noise_std = cmd->add_option("--noise-std", f.noise_std, "observation noise standard deviation")
                    ->check(CLI::NonNegativeNumber);
  o.div = cmd->add_option("--div", f.div, "diversity grid divisions")->check(CLI::PositiveNumber);
  o.config = cmd->add_option("--config", f.config, "configuration file (costs and optimizer sections)");
  return o;
}

std::filesystem::path output_root(const RunFlags& f, const RunOptions& o) {
  if (o.out->count()) return f.out;
  if (const char* env = std::getenv("FLEXIBO_OUT"); env && *env) return env;
  return "results";
}

RunManifest build_manifest(const RunFlags& f, const RunOptions& o, bool compare, std::ostream& out) {
  Config cfg = o.config->count() ? load_config(f.config) : Config{};
  out << "defaults: iterations=200 init_k=15 seeds=5 epsilon_frac=4e-05 delta=0.05 theta=(1,10) phi=1 div=10\n";

  RunManifest m;
  m.problem = f.problem;
  make_problem(m.problem);  // fails early on unknown names
  m.settings = cfg.run;
  if (o.surrogate->count()) m.settings.surrogate = parse_surrogate(f.surrogate);
  if (o.iters->count()) m.settings.iterations = f.iters;
  if (o.init_k->count()) m.settings.init_k = f.init_k;
  if (o.delta->count()) {
    if (!(f.delta > 0.0 && f.delta < 1.0)) throw ConfigError("--delta must lie in (0, 1)");
    m.settings.delta = f.delta;
  }
  if (o.theta1->count() || o.theta2->count() || o.phi->count()) {
    const auto& c = m.settings.costs;
    const std::array<double, 2> theta{o.theta1->count() ? f.theta1 : c.theta()[0],
                                      o.theta2->count() ? f.theta2 : c.theta()[1]};
    try {
      m.settings.costs = CostModel(theta, o.phi->count() ? f.phi : c.phi());
    } catch (const CostModelError& e) {
      throw ConfigError(e.what());
    }
  }
  m.noise_std = o.noise_std->count() ? f.noise_std : cfg.noise_std;
  m.div = o.div->count() ? f.div : cfg.div;
  m.jobs = o.jobs->count() ? f.jobs : cfg.jobs;

  const std::uint64_t first = o.seed->count() ? f.seed : m.settings.seed;
  const std::size_t count = o.seeds->count() ? f.seeds : (compare ? cfg.seeds : 1);
  for (std::size_t i = 0; i < count; ++i) m.seeds.push_back(first + i);

  if (compare) {
    m.methods = o.method->count() ? f.methods
                                  : std::vector<std::string>{"flexibo-gp", "pal", "rs", "sobo-1", "sobo-2"};
    if (m.methods.size() < 2) throw ConfigError("compare needs at least two methods");
    m.modes = o.mode->count() ? std::vector<Mode>{parse_mode(f.mode)} : std::vector<Mode>{Mode::fcm, Mode::tbm};
  } else {
    std::string method = f.methods.front();
    if (method == "flexibo") method = "flexibo-" + std::string(to_string(m.settings.surrogate));
    m.methods = {method};
    m.modes = {o.mode->count() ? parse_mode(f.mode) : Mode::fcm};
  }
  if (o.budget_from->count()) m.budget_from = f.budget_from;
  m.out = output_root(f, o);

  out << "settings: problem=" << m.problem << " iterations=" << m.settings.iterations
      << " init_k=" << m.settings.init_k << " seeds=" << m.seeds.front() << ".." << m.seeds.back()
      << " theta=(" << m.settings.costs.theta()[0] << "," << m.settings.costs.theta()[1]
      << ") phi=" << m.settings.costs.phi() << " psi=(" << m.settings.costs.psi(0) << ","
      << m.settings.costs.psi(1) << ") delta=" << m.settings.delta << " epsilon_frac=" << m.settings.epsilon_frac
      << " div=" << m.div << " noise_std=" << m.noise_std << " jobs=" << m.jobs << " out=" << m.out.string()
      << '\n';
  return m;
}

void print_cell(const CellResult& c, const std::array<ObjectiveSpec, 2>& objs, std::ostream& out) {
  out << "\n[" << c.method << " seed " << c.seed << " " << to_string(c.mode) << "]\n";
  if (!c.error.empty()) {
    out << "  failed: " << c.error << '\n';
    return;
  }
  const auto& s = c.summary;
  out << "  stop: " << s.stop << " after " << s.iterations << " iterations\n";
  out << "  cost: total " << s.total_cost << ", " << objs[0].name << " evaluations " << s.counts[0] << ", "
      << objs[1].name << " evaluations " << s.counts[1] << '\n';
  if (c.result.region) {
    out << "  pareto region: volume " << c.result.region->volume << ", pessimistic front "
        << c.result.region->pess.points.size() << " points, optimistic front " << c.result.region->opt.points.size()
        << " points\n";
  }
  if (s.best_point) out << "  best point: " << *s.best_point << '\n';
  out << "  actual front (" << s.front.size() << " points, hypervolume " << s.hypervolume << "):\n";
  for (const auto& e : s.front)
    out << "    " << std::setw(6) << e.flat_id << "  " << objs[0].name << "=" << e.values[0] << "  " << objs[1].name
        << "=" << e.values[1] << '\n';
}

int execute(const RunManifest& m, bool compare, std::ostream& out, std::ostream& err) {
  const auto result = run_experiment(m);
  const auto problem = make_problem(m.problem);
  if (!compare) {
    for (const auto& c : result.cells) print_cell(c, problem->objectives(), out);
  } else {
    for (const auto& c : result.cells)
      if (!c.error.empty()) print_cell(c, problem->objectives(), out);
    const std::vector<std::filesystem::path> inputs{m.out / m.problem};
    const auto rep = build_report(inputs);
    write_report(rep, m.out / m.problem / "report");
    out << '\n' << format_report(rep);
  }
  out << "\nresults: " << (m.out / m.problem).string() << '\n';
  if (!result.ok()) {
    err << "error: some runs failed\n";
    return 1;
  }
  return 0;
}

int validate(const std::string& path, std::ostream& out) {
  const Config cfg = load_config(path, true);
  const auto& ps = *cfg.space;
  out << "design space: " << ps.space.size() << " points over " << ps.space.dimensions() << " options\n";
  for (const auto& o : ps.space.options()) out << "  " << o.name << ": " << o.cardinality() << " values\n";
  out << "objectives and costs:\n";
  out << "  " << std::left << std::setw(16) << "objective" << std::setw(10) << "direction" << std::setw(10)
      << "theta" << "psi\n";
  for (std::size_t i = 0; i < 2; ++i) {
    out << "  " << std::setw(16) << ps.objectives[i].name << std::setw(10) << to_string(ps.objectives[i].direction)
        << std::setw(10) << cfg.run.costs.theta()[i] << cfg.run.costs.psi(i) << '\n';
  }
  out << "phi: " << cfg.run.costs.phi() << '\n';
  return 0;
}

void list_problems(std::ostream& out) {
  for (const auto& p : builtin_problems()) {
    out << p->name() << ": " << p->space().size() << " points, " << p->space().dimensions() << " options; "
        << p->objectives()[0].name << " (" << to_string(p->objectives()[0].direction) << ", cheap), "
        << p->objectives()[1].name << " (" << to_string(p->objectives()[1].direction) << ", expensive); "
        << "true front " << p->true_front().points.size() << " points\n    " << p->summary() << '\n';
  }
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Cost-aware multi-objective Bayesian optimization over finite design spaces", "flexibo"};
  app.require_subcommand(1);

  RunFlags run_flags, compare_flags;
  auto* run_cmd = app.add_subcommand("run", "run one method on a built-in problem");
  const auto run_opts = add_run_flags(run_cmd, run_flags, false);
  auto* compare_cmd = app.add_subcommand("compare", "run several methods under shared seeds");
  const auto compare_opts = add_run_flags(compare_cmd, compare_flags, true);

  std::vector<std::string> report_inputs;
  std::string report_out;
  std::vector<double> report_reference;
  auto* report_cmd = app.add_subcommand("report", "tables and hypervolume series from result directories");
  report_cmd->add_option("inputs", report_inputs, "problem result directories or summary.jsonl files")->required();
  auto* report_out_opt = report_cmd->add_option("--out", report_out, "directory for the CSV tables");
  auto* report_ref_opt = report_cmd->add_option("--reference", report_reference, "hypervolume reference point")
                             ->expected(2)
                             ->delimiter(',');

  auto* problems_cmd = app.add_subcommand("problems", "list the built-in problems");

  std::string validate_path;
  auto* validate_cmd = app.add_subcommand("validate", "check a configuration file");
  validate_cmd->add_option("config,--config", validate_path, "configuration file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (*run_cmd) return execute(build_manifest(run_flags, run_opts, false, out), false, out, err);
    if (*compare_cmd) return execute(build_manifest(compare_flags, compare_opts, true, out), true, out, err);
    if (*report_cmd) {
      std::vector<std::filesystem::path> inputs(report_inputs.begin(), report_inputs.end());
      std::optional<Vec2> ref;
      if (report_ref_opt->count()) ref = Vec2{report_reference[0], report_reference[1]};
      const auto rep = build_report(inputs, ref);
      const auto base = std::filesystem::is_directory(inputs.front()) ? inputs.front() : inputs.front().parent_path();
      write_report(rep, report_out_opt->count() ? std::filesystem::path(report_out) : base / "report");
      out << format_report(rep);
      return 0;
    }
    if (*problems_cmd) {
      list_problems(out);
      return 0;
    }
    if (*validate_cmd) {
      return validate(validate_path, out);
    }
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace flexibo
