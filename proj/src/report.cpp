#include "flexibo/report.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <map>
#include <sstream>
#include <stdexcept>

namespace flexibo {

double quantile(std::vector<double> values, double p) {
  if (values.empty()) throw std::invalid_argument("quantile of an empty sample");
  std::sort(values.begin(), values.end());
  const double h = static_cast<double>(values.size() - 1) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  if (lo + 1 >= values.size()) return values.back();
  return values[lo] + (h - static_cast<double>(lo)) * (values[lo + 1] - values[lo]);
}

Spread spread(const std::vector<double>& values) {
  return Spread{quantile(values, 0.5), quantile(values, 0.25), quantile(values, 0.75)};
}

std::vector<double> hypervolume_series(const std::vector<TraceLine>& lines,
                                       const std::array<ObjectiveSpec, 2>& objectives, const Vec2& reference) {
  std::map<std::size_t, std::array<std::optional<double>, 2>> seen;
  std::vector<FrontPoint> full;
  std::vector<double> out;
  auto close_iteration = [&] { out.push_back(hypervolume(nondominated_front(full), reference)); };

  std::size_t current = 0;
  for (const auto& l : lines) {
    if (l.t < current) throw std::runtime_error("trace iterations are not ordered");
    while (current < l.t) {
      close_iteration();
      ++current;
    }
    auto& slot = seen[l.flat_id];
    for (std::size_t i = 0; i < l.objectives.size(); ++i) {
      const std::size_t k = l.objectives[i] - 1;
      if (k > 1) throw std::runtime_error("objective index out of range in trace");
      slot[k] = objectives[k].to_internal(l.values[i]);
    }
    if (slot[0] && slot[1] && std::none_of(full.begin(), full.end(), [&](const FrontPoint& p) { return p.owner == l.flat_id; }))
      full.push_back(FrontPoint{l.flat_id, {*slot[0], *slot[1]}, false});
  }
  close_iteration();
  return out;
}

Report build_report(std::span<const std::filesystem::path> inputs, std::optional<Vec2> reference) {
  if (inputs.empty()) throw std::invalid_argument("no result inputs given");
  struct Loaded {
    RunSummary summary;
    std::filesystem::path root;
  };
  std::vector<Loaded> runs;
  for (const auto& in : inputs) {
    const auto file = std::filesystem::is_directory(in) ? in / "summary.jsonl" : in;
    for (const auto& j : read_json_lines(file)) runs.push_back({RunSummary::from_json(j), file.parent_path()});
  }
  if (runs.empty()) throw std::invalid_argument("result inputs contain no runs");

  Report rep;
  rep.problem = runs.front().summary.problem;
  for (const auto& r : runs)
    if (r.summary.problem != rep.problem)
      throw std::invalid_argument("inputs mix problems '" + rep.problem + "' and '" + r.summary.problem + "'");
  rep.reference = reference.value_or(runs.front().summary.reference);

  // Group keys in first-seen order so tables follow the input ordering.
  std::vector<std::pair<Mode, std::string>> keys;
  std::map<std::pair<Mode, std::string>, std::vector<const Loaded*>> groups;
  for (const auto& r : runs) {
    const auto key = std::make_pair(r.summary.mode, r.summary.method);
    if (!groups.count(key)) keys.push_back(key);
    groups[key].push_back(&r);
  }
  std::stable_sort(keys.begin(), keys.end(), [](const auto& a, const auto& b) { return a.first < b.first; });

  for (const auto& key : keys) {
    const auto& g = groups[key];
    std::vector<double> cost, c1, c2, wall, contrib, div;
    for (const auto* r : g) {
      cost.push_back(r->summary.total_cost);
      c1.push_back(static_cast<double>(r->summary.counts[0]));
      c2.push_back(static_cast<double>(r->summary.counts[1]));
      wall.push_back(r->summary.wall_time);
      if (r->summary.contribution) contrib.push_back(*r->summary.contribution);
      if (r->summary.diversity) div.push_back(*r->summary.diversity);
    }
    rep.costs.push_back(CostRow{key.first, key.second, g.size(), spread(cost), spread(c1), spread(c2), spread(wall)});
    MetricRow mr{key.first, key.second, {}, {}};
    if (!contrib.empty()) mr.contribution = spread(contrib);
    if (!div.empty()) mr.diversity = spread(div);
    rep.metrics.push_back(mr);

    std::vector<std::vector<double>> per_seed;
    std::size_t longest = 0;
    for (const auto* r : g) {
      const auto trace = r->root / r->summary.method / ("seed-" + std::to_string(r->summary.seed)) /
                         ("trace_" + std::string(to_string(r->summary.mode)) + ".jsonl");
      std::vector<TraceLine> lines;
      for (const auto& j : read_json_lines(trace)) lines.push_back(TraceLine::from_json(j));
      per_seed.push_back(hypervolume_series(lines, r->summary.objectives, rep.reference));
      longest = std::max(longest, per_seed.back().size());
    }
    Series s{key.first, key.second, {}};
    for (std::size_t t = 0; t < longest; ++t) {
      std::vector<double> at;
      for (const auto& v : per_seed) at.push_back(t < v.size() ? v[t] : v.back());
      s.points.push_back(SeriesPoint{t, spread(at)});
    }
    rep.series.push_back(std::move(s));
  }
  return rep;
}

namespace {

std::string num(double v) {
  std::ostringstream os;
  os << std::setprecision(10) << v;
  return os.str();
}

std::string spread_csv(const std::optional<Spread>& s) {
  if (!s) return ",,";
  return num(s->median) + ',' + num(s->q25) + ',' + num(s->q75);
}

}  // namespace

void write_report(const Report& rep, const std::filesystem::path& dir) {
  std::string costs = "problem,mode,method,runs,total_cost_median,total_cost_q25,total_cost_q75,count_obj1_median,"
                      "count_obj2_median,wall_time_median\n";
  for (const auto& r : rep.costs) {
    costs += rep.problem + ',' + std::string(to_string(r.mode)) + ',' + r.method + ',' + std::to_string(r.runs) +
             ',' + spread_csv(r.total_cost) + ',' + num(r.count_obj1.median) + ',' + num(r.count_obj2.median) +
             ',' + num(r.wall_time.median) + '\n';
  }
  std::string metrics = "problem,mode,method,contribution_median,contribution_q25,contribution_q75,"
                        "diversity_median,diversity_q25,diversity_q75\n";
  for (const auto& r : rep.metrics) {
    metrics += rep.problem + ',' + std::string(to_string(r.mode)) + ',' + r.method + ',' +
               spread_csv(r.contribution) + ',' + spread_csv(r.diversity) + '\n';
  }
  std::string series = "problem,mode,method,iteration,median,q25,q75\n";
  for (const auto& s : rep.series) {
    for (const auto& p : s.points) {
      series += rep.problem + ',' + std::string(to_string(s.mode)) + ',' + s.method + ',' +
                std::to_string(p.iteration) + ',' + spread_csv(p.hypervolume) + '\n';
    }
  }
  write_text_file(dir / "cost_table.csv", costs);
  write_text_file(dir / "metrics.csv", metrics);
  write_text_file(dir / "hv_series.csv", series);
}

std::string format_report(const Report& rep) {
  std::ostringstream os;
  os << "problem " << rep.problem << "  reference (" << num(rep.reference[0]) << ", " << num(rep.reference[1])
     << ")\n\n";
  os << "cost (median over runs)\n";
  os << std::left << std::setw(5) << "mode" << std::setw(12) << "method" << std::right << std::setw(6) << "runs"
     << std::setw(12) << "cost" << std::setw(10) << "obj1" << std::setw(10) << "obj2" << std::setw(12) << "wall s"
     << '\n';
  for (const auto& r : rep.costs) {
    os << std::left << std::setw(5) << to_string(r.mode) << std::setw(12) << r.method << std::right << std::setw(6)
       << r.runs << std::setw(12) << num(r.total_cost.median) << std::setw(10) << num(r.count_obj1.median)
       << std::setw(10) << num(r.count_obj2.median) << std::setw(12) << std::fixed << std::setprecision(3)
       << r.wall_time.median << std::defaultfloat << '\n';
  }
  os << "\ncontribution and diversity (median [q25, q75])\n";
  auto show = [&](const std::optional<Spread>& s) {
    std::ostringstream c;
    if (!s) {
      c << "n/a";
    } else {
      c << std::fixed << std::setprecision(3) << s->median << " [" << s->q25 << ", " << s->q75 << "]";
    }
    return c.str();
  };
  for (const auto& r : rep.metrics) {
    os << std::left << std::setw(5) << to_string(r.mode) << std::setw(12) << r.method << std::setw(26)
       << show(r.contribution) << show(r.diversity) << '\n';
  }
  os << "\nfinal hypervolume (median [q25, q75])\n";
  for (const auto& s : rep.series) {
    if (s.points.empty()) continue;
    const auto& last = s.points.back();
    os << std::left << std::setw(5) << to_string(s.mode) << std::setw(12) << s.method << show(last.hypervolume)
       << "  after " << last.iteration << " iterations\n";
  }
  return os.str();
}

}  // namespace flexibo
