#include "flexibo/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace flexibo {

namespace {

void reject_unknown(const nlohmann::json& obj, std::string_view section, const std::set<std::string>& known) {
  for (const auto& [key, _] : obj.items())
    if (!known.count(key)) throw ConfigError("unknown key '" + key + "' in '" + std::string(section) + "'");
}

template <typename T>
T read(const nlohmann::json& obj, const char* key, T fallback) {
  if (!obj.contains(key)) return fallback;
  try {
    return obj.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError(std::string("key '") + key + "' has the wrong type");
  }
}

std::size_t read_count(const nlohmann::json& obj, const char* key, std::size_t fallback) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (!v.is_number_integer() || v.get<long long>() < 0)
    throw ConfigError(std::string("key '") + key + "' must be a non-negative integer");
  return v.get<std::size_t>();
}

}  // namespace

SurrogateKind parse_surrogate(std::string_view text) {
  if (text == "gp") return SurrogateKind::gp;
  if (text == "rf") return SurrogateKind::rf;
  throw ConfigError("unknown surrogate '" + std::string(text) + "' (expected gp or rf)");
}

std::string_view to_string(SurrogateKind kind) { return kind == SurrogateKind::gp ? "gp" : "rf"; }

Config parse_config(const nlohmann::json& doc, bool require_space) {
  if (!doc.is_object()) throw ConfigError("configuration must be an object");
  reject_unknown(doc, "top level", {"options", "objectives", "costs", "optimizer"});
  Config cfg;
  if (doc.contains("options") || doc.contains("objectives") || require_space)
    cfg.space = parse_space_json(doc);

  if (doc.contains("costs")) {
    const auto& c = doc["costs"];
    if (!c.is_object()) throw ConfigError("'costs' must be an object");
    reject_unknown(c, "costs", {"theta", "phi"});
    std::array<double, 2> theta = cfg.run.costs.theta();
    if (c.contains("theta")) {
      const auto& t = c["theta"];
      if (!t.is_array() || t.size() != 2 || !t[0].is_number() || !t[1].is_number())
        throw ConfigError("'costs.theta' must list one effort per objective (bi-objective only)");
      theta = {t[0].get<double>(), t[1].get<double>()};
    }
    try {
      cfg.run.costs = CostModel(theta, read(c, "phi", cfg.run.costs.phi()));
    } catch (const CostModelError& e) {
      throw ConfigError(e.what());
    }
  }

  if (doc.contains("optimizer")) {
    const auto& o = doc["optimizer"];
    if (!o.is_object()) throw ConfigError("'optimizer' must be an object");
    reject_unknown(o, "optimizer",
                   {"iterations", "init_k", "seed", "seeds", "surrogate", "delta", "epsilon_frac", "length_scale",
                    "signal_variance", "noise_variance", "refresh_every", "trees", "min_leaf", "sobo_criterion",
                    "div", "noise_std", "jobs", "checkpoint_every"});
    auto& r = cfg.run;
    r.iterations = read_count(o, "iterations", r.iterations);
    r.init_k = read_count(o, "init_k", r.init_k);
    r.seed = read_count(o, "seed", r.seed);
    cfg.seeds = read_count(o, "seeds", cfg.seeds);
    if (o.contains("surrogate")) r.surrogate = parse_surrogate(read<std::string>(o, "surrogate", ""));
    r.delta = read(o, "delta", r.delta);
    r.epsilon_frac = read(o, "epsilon_frac", r.epsilon_frac);
    r.model.length_scale = read(o, "length_scale", r.model.length_scale);
    r.model.signal_variance = read(o, "signal_variance", r.model.signal_variance);
    r.model.noise_variance = read(o, "noise_variance", r.model.noise_variance);
    r.model.refresh_every = read_count(o, "refresh_every", r.model.refresh_every);
    r.model.forest.trees = read_count(o, "trees", r.model.forest.trees);
    r.model.forest.min_leaf = read_count(o, "min_leaf", r.model.forest.min_leaf);
    r.checkpoint_every = read_count(o, "checkpoint_every", r.checkpoint_every);
    if (o.contains("sobo_criterion")) {
      const auto c = read<std::string>(o, "sobo_criterion", "");
      if (c == "pi") r.sobo_criterion = ImprovementCriterion::probability;
      else if (c == "ei") r.sobo_criterion = ImprovementCriterion::expected;
      else throw ConfigError("unknown sobo_criterion '" + c + "' (expected pi or ei)");
    }
    cfg.div = read_count(o, "div", cfg.div);
    cfg.noise_std = read(o, "noise_std", cfg.noise_std);
    cfg.jobs = read_count(o, "jobs", cfg.jobs);

    if (r.iterations < 1) throw ConfigError("'iterations' must be at least 1");
    if (!(r.delta > 0.0 && r.delta < 1.0)) throw ConfigError("'delta' must lie in (0, 1)");
    if (!(r.epsilon_frac >= 0.0)) throw ConfigError("'epsilon_frac' must be >= 0");
    if (!(r.model.length_scale > 0.0) || !(r.model.signal_variance > 0.0) || !(r.model.noise_variance >= 0.0))
      throw ConfigError("kernel parameters must be positive");
    if (r.model.forest.trees < 1 || r.model.forest.min_leaf < 1) throw ConfigError("forest sizes must be >= 1");
    if (cfg.div < 1) throw ConfigError("'div' must be >= 1");
    if (!(cfg.noise_std >= 0.0)) throw ConfigError("'noise_std' must be >= 0");
    if (cfg.jobs < 1) throw ConfigError("'jobs' must be >= 1");
  }
  if (cfg.space && cfg.run.init_k > cfg.space->space.size())
    throw ConfigError("'init_k' exceeds the design space size");
  return cfg;
}

Config parse_config_text(std::string_view text, bool require_space) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("malformed configuration: ") + e.what());
  }
  return parse_config(doc, require_space);
}

Config load_config(const std::filesystem::path& path, bool require_space) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read configuration '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str(), require_space);
}

}  // namespace flexibo
