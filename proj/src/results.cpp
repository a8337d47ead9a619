#include "flexibo/results.hpp"

#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>

namespace flexibo {

namespace {

nlohmann::json optional_json(const std::optional<double>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

std::optional<double> optional_double(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<double>();
}

std::string csv_number(const std::optional<double>& v) {
  if (!v) return "";
  std::ostringstream os;
  os << std::setprecision(17) << *v;
  return os.str();
}

}  // namespace

std::string_view to_string(Mode m) { return m == Mode::fcm ? "fcm" : "tbm"; }

Mode parse_mode(std::string_view text) {
  if (text == "fcm") return Mode::fcm;
  if (text == "tbm") return Mode::tbm;
  throw std::invalid_argument("unknown mode '" + std::string(text) + "' (expected fcm or tbm)");
}

nlohmann::json TraceLine::to_json() const {
  return {{"schema_version", kSchemaVersion},
          {"t", t},
          {"flat_id", flat_id},
          {"objectives", objectives},
          {"values", values},
          {"cost", cost},
          {"cumulative_cost", cumulative_cost},
          {"volume", optional_json(volume)},
          {"hypervolume", optional_json(hypervolume)}};
}

TraceLine TraceLine::from_json(const nlohmann::json& j) {
  TraceLine l;
  l.t = j.at("t").get<std::size_t>();
  l.flat_id = j.at("flat_id").get<std::size_t>();
  l.objectives = j.at("objectives").get<std::vector<std::size_t>>();
  l.values = j.at("values").get<std::vector<double>>();
  l.cost = j.at("cost").get<double>();
  l.cumulative_cost = j.at("cumulative_cost").get<double>();
  l.volume = optional_double(j, "volume");
  l.hypervolume = optional_double(j, "hypervolume");
  return l;
}

std::vector<TraceLine> trace_lines(const RunResult& result, const std::array<ObjectiveSpec, 2>& objectives) {
  std::vector<TraceLine> out;
  // Initial design, grouped by point in evaluation order.
  std::map<std::size_t, std::size_t> slot;
  double cumulative = 0.0;
  for (const auto& r : result.records) {
    if (r.iteration != 0) continue;
    auto [it, fresh] = slot.emplace(r.flat_id, out.size());
    if (fresh) {
      TraceLine l;
      l.flat_id = r.flat_id;
      out.push_back(std::move(l));
    }
    auto& l = out[it->second];
    cumulative += r.cost;
    l.objectives.push_back(r.objective + 1);
    l.values.push_back(objectives[r.objective].to_reported(r.value));
    l.cost += r.cost;
    l.cumulative_cost = cumulative;
  }
  for (const auto& tr : result.trace) {
    TraceLine l;
    l.t = tr.t;
    l.flat_id = tr.flat_id;
    for (std::size_t i = 0; i < tr.objectives.size(); ++i) {
      l.objectives.push_back(tr.objectives[i] + 1);
      l.values.push_back(objectives[tr.objectives[i]].to_reported(tr.values[i]));
    }
    l.cost = tr.cost;
    l.cumulative_cost = tr.cumulative_cost;
    l.volume = tr.volume;
    l.hypervolume = tr.hypervolume;
    out.push_back(std::move(l));
  }
  return out;
}

nlohmann::json RunSummary::to_json() const {
  nlohmann::json objs = nlohmann::json::array();
  for (const auto& o : objectives)
    objs.push_back({{"name", o.name}, {"direction", to_string(o.direction)}, {"unit", o.unit}});
  nlohmann::json fr = nlohmann::json::array();
  for (const auto& e : front) fr.push_back({{"flat_id", e.flat_id}, {"values", e.values}});
  return {{"schema_version", kSchemaVersion},
          {"problem", problem},
          {"method", method},
          {"seed", seed},
          {"mode", to_string(mode)},
          {"objectives", objs},
          {"reference", reference},
          {"iterations", iterations},
          {"stop", stop},
          {"total_cost", total_cost},
          {"count_obj1", counts[0]},
          {"count_obj2", counts[1]},
          {"budget", optional_json(budget)},
          {"expensive_cap", expensive_cap ? nlohmann::json(*expensive_cap) : nlohmann::json(nullptr)},
          {"hypervolume", hypervolume},
          {"contribution", optional_json(contribution)},
          {"diversity", optional_json(diversity)},
          {"final_volume", optional_json(final_volume)},
          {"front", fr},
          {"best_point", best_point ? nlohmann::json(*best_point) : nlohmann::json(nullptr)},
          {"wall_time", wall_time}};
}

RunSummary RunSummary::from_json(const nlohmann::json& j) {
  if (j.value("schema_version", 0) != kSchemaVersion) throw std::runtime_error("unsupported summary schema version");
  RunSummary s;
  s.problem = j.at("problem").get<std::string>();
  s.method = j.at("method").get<std::string>();
  s.seed = j.at("seed").get<std::uint64_t>();
  s.mode = parse_mode(j.at("mode").get<std::string>());
  const auto& objs = j.at("objectives");
  for (std::size_t i = 0; i < 2; ++i) {
    s.objectives[i].name = objs.at(i).at("name").get<std::string>();
    s.objectives[i].direction = parse_direction(objs.at(i).at("direction").get<std::string>());
    s.objectives[i].unit = objs.at(i).value("unit", std::string());
  }
  s.reference = j.at("reference").get<Vec2>();
  s.iterations = j.at("iterations").get<std::size_t>();
  s.stop = j.at("stop").get<std::string>();
  s.total_cost = j.at("total_cost").get<double>();
  s.counts = {j.at("count_obj1").get<std::size_t>(), j.at("count_obj2").get<std::size_t>()};
  s.budget = optional_double(j, "budget");
  if (j.contains("expensive_cap") && !j["expensive_cap"].is_null())
    s.expensive_cap = j["expensive_cap"].get<std::size_t>();
  s.hypervolume = j.at("hypervolume").get<double>();
  s.contribution = optional_double(j, "contribution");
  s.diversity = optional_double(j, "diversity");
  s.final_volume = optional_double(j, "final_volume");
  for (const auto& e : j.at("front")) s.front.push_back({e.at("flat_id").get<std::size_t>(), e.at("values").get<Vec2>()});
  if (j.contains("best_point") && !j["best_point"].is_null()) s.best_point = j["best_point"].get<std::size_t>();
  s.wall_time = j.at("wall_time").get<double>();
  return s;
}

std::string csv_header() {
  return "problem,method,seed,mode,contribution,diversity,total_cost,wall_time,count_obj1,count_obj2,hypervolume,"
         "iterations,stop";
}

std::string csv_row(const RunSummary& s) {
  std::ostringstream os;
  os << s.problem << ',' << s.method << ',' << s.seed << ',' << to_string(s.mode) << ','
     << csv_number(s.contribution) << ',' << csv_number(s.diversity) << ',' << csv_number(s.total_cost) << ','
     << csv_number(s.wall_time) << ',' << s.counts[0] << ',' << s.counts[1] << ',' << csv_number(s.hypervolume)
     << ',' << s.iterations << ',' << s.stop;
  return os.str();
}

nlohmann::json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read '" + path.string() + "'");
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::runtime_error("malformed JSON in '" + path.string() + "': " + e.what());
  }
}

std::vector<nlohmann::json> read_json_lines(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read '" + path.string() + "'");
  std::vector<nlohmann::json> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    try {
      out.push_back(nlohmann::json::parse(line));
    } catch (const nlohmann::json::parse_error& e) {
      throw std::runtime_error("malformed line in '" + path.string() + "': " + e.what());
    }
  }
  return out;
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  const auto tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + tmp + "'");
    out << text;
    if (!out) throw std::runtime_error("write failed for '" + tmp + "'");
  }
  std::filesystem::rename(tmp, path);
}

std::filesystem::path run_directory(const std::filesystem::path& root, const std::string& problem,
                                    const std::string& method, std::uint64_t seed) {
  return root / problem / method / ("seed-" + std::to_string(seed));
}

}  // namespace flexibo
