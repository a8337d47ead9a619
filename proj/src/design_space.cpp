#include "flexibo/design_space.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

#include "flexibo/rng.hpp"

namespace flexibo {

bool OptionDef::is_numeric() const {
  return !values.empty() && std::holds_alternative<double>(values.front());
}

std::string OptionDef::label(std::size_t index) const {
  const auto& v = values.at(index);
  if (const auto* s = std::get_if<std::string>(&v)) return *s;
  std::ostringstream os;
  os << std::get<double>(v);
  return os.str();
}

namespace {

void validate_option(const OptionDef& opt) {
  if (opt.name.empty()) throw ConfigError("option with empty name");
  if (opt.values.empty()) throw ConfigError("option '" + opt.name + "' has an empty value list");
  const bool numeric = opt.is_numeric();
  for (const auto& v : opt.values) {
    if (std::holds_alternative<double>(v) != numeric)
      throw ConfigError("option '" + opt.name + "' mixes numeric and categorical values");
  }
  std::set<OptionDef::Value> seen;
  for (const auto& v : opt.values) {
    if (!seen.insert(v).second)
      throw ConfigError("option '" + opt.name + "' has duplicate value '" +
                        opt.label(static_cast<std::size_t>(&v - opt.values.data())) + "'");
  }
}

}  // namespace

DesignSpace::DesignSpace(std::vector<OptionDef> options, std::size_t max_size)
    : options_(std::move(options)) {
  if (options_.empty()) throw ConfigError("design space needs at least one option");
  std::set<std::string> names;
  for (const auto& opt : options_) {
    validate_option(opt);
    if (!names.insert(opt.name).second) throw ConfigError("duplicate option name '" + opt.name + "'");
  }
  strides_.assign(options_.size(), 1);
  size_ = 1;
  for (std::size_t d = options_.size(); d-- > 0;) {
    strides_[d] = size_;
    const auto card = options_[d].cardinality();
    if (size_ > max_size / card)
      throw ConfigError("design space exceeds the size limit of " + std::to_string(max_size));
    size_ *= card;
  }
  if (size_ > max_size)
    throw ConfigError("design space exceeds the size limit of " + std::to_string(max_size));
}

DesignPoint DesignSpace::point(std::size_t flat_id) const {
  if (flat_id >= size_) throw std::out_of_range("flat id " + std::to_string(flat_id) + " outside design space");
  DesignPoint p;
  p.flat_id = flat_id;
  p.indices.resize(options_.size());
  for (std::size_t d = 0; d < options_.size(); ++d) {
    p.indices[d] = flat_id / strides_[d];
    flat_id %= strides_[d];
  }
  return p;
}

DesignPoint DesignSpace::point(std::vector<std::size_t> indices) const {
  DesignPoint p;
  p.flat_id = flat_id(indices);
  p.indices = std::move(indices);
  return p;
}

std::size_t DesignSpace::flat_id(std::span<const std::size_t> indices) const {
  if (indices.size() != options_.size()) throw std::out_of_range("index vector has wrong dimensionality");
  std::size_t id = 0;
  for (std::size_t d = 0; d < options_.size(); ++d) {
    if (indices[d] >= options_[d].cardinality())
      throw std::out_of_range("index out of range for option '" + options_[d].name + "'");
    id += indices[d] * strides_[d];
  }
  return id;
}

std::vector<double> DesignSpace::encode(const DesignPoint& p) const {
  if (p.indices.size() != options_.size()) throw std::out_of_range("point has wrong dimensionality");
  std::vector<double> x(options_.size(), 0.0);
  for (std::size_t d = 0; d < options_.size(); ++d) {
    const auto& opt = options_[d];
    const auto idx = p.indices[d];
    if (idx >= opt.cardinality()) throw std::out_of_range("index out of range for option '" + opt.name + "'");
    if (opt.cardinality() == 1) continue;
    if (opt.is_numeric()) {
      auto [lo, hi] = std::minmax_element(opt.values.begin(), opt.values.end());
      const double vmin = std::get<double>(*lo);
      const double vmax = std::get<double>(*hi);
      x[d] = (std::get<double>(opt.values[idx]) - vmin) / (vmax - vmin);
    } else {
      x[d] = static_cast<double>(idx) / static_cast<double>(opt.cardinality() - 1);
    }
  }
  return x;
}

std::vector<double> DesignSpace::encode(std::size_t flat_id) const { return encode(point(flat_id)); }

std::vector<std::vector<double>> DesignSpace::encode_all() const {
  std::vector<std::vector<double>> out;
  out.reserve(size_);
  for (std::size_t id = 0; id < size_; ++id) out.push_back(encode(id));
  return out;
}

std::string DesignSpace::describe(std::size_t flat_id) const {
  const auto p = point(flat_id);
  std::ostringstream os;
  for (std::size_t d = 0; d < options_.size(); ++d) {
    if (d) os << ", ";
    os << options_[d].name << '=' << options_[d].label(p.indices[d]);
  }
  return os.str();
}

Direction parse_direction(std::string_view text) {
  if (text == "maximize" || text == "max") return Direction::maximize;
  if (text == "minimize" || text == "min") return Direction::minimize;
  throw ConfigError("unknown objective direction '" + std::string(text) + "'");
}

std::string_view to_string(Direction d) { return d == Direction::maximize ? "maximize" : "minimize"; }

ParsedSpace parse_space_json(const nlohmann::json& doc, std::size_t max_size) {
  if (!doc.is_object()) throw ConfigError("configuration must be an object");
  if (!doc.contains("options") || !doc["options"].is_array() || doc["options"].empty())
    throw ConfigError("'options' must be a non-empty list");

  std::vector<OptionDef> options;
  for (const auto& entry : doc["options"]) {
    if (!entry.is_object() || !entry.contains("name") || !entry["name"].is_string())
      throw ConfigError("each option needs a string 'name'");
    OptionDef opt;
    opt.name = entry["name"].get<std::string>();
    if (!entry.contains("values") || !entry["values"].is_array())
      throw ConfigError("option '" + opt.name + "' needs a 'values' list");
    for (const auto& v : entry["values"]) {
      if (v.is_number()) {
        opt.values.emplace_back(v.get<double>());
      } else if (v.is_string()) {
        opt.values.emplace_back(v.get<std::string>());
      } else {
        throw ConfigError("option '" + opt.name + "' has a value that is neither number nor string");
      }
    }
    options.push_back(std::move(opt));
  }

  if (!doc.contains("objectives") || !doc["objectives"].is_array())
    throw ConfigError("'objectives' must be a list");
  const auto& objs = doc["objectives"];
  if (objs.size() != 2)
    throw ConfigError("exactly 2 objectives are supported (bi-objective only), got " +
                      std::to_string(objs.size()));
  std::array<ObjectiveSpec, 2> objectives;
  for (std::size_t i = 0; i < 2; ++i) {
    const auto& o = objs[i];
    if (!o.is_object() || !o.contains("name") || !o["name"].is_string())
      throw ConfigError("each objective needs a string 'name'");
    objectives[i].name = o["name"].get<std::string>();
    objectives[i].direction = parse_direction(o.value("direction", std::string("maximize")));
    objectives[i].unit = o.value("unit", std::string());
  }
  if (objectives[0].name == objectives[1].name) throw ConfigError("duplicate objective name");

  return ParsedSpace{DesignSpace(std::move(options), max_size), objectives};
}

ParsedSpace parse_space(std::string_view config_text, std::size_t max_size) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(config_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("malformed configuration document: ") + e.what());
  }
  return parse_space_json(doc, max_size);
}

std::vector<DesignPoint> sample_random(const DesignSpace& space, std::size_t k, std::uint64_t seed) {
  if (k > space.size())
    throw std::invalid_argument("cannot sample " + std::to_string(k) + " distinct points from a space of " +
                                std::to_string(space.size()));
  std::vector<std::size_t> ids(space.size());
  std::iota(ids.begin(), ids.end(), std::size_t{0});
  Rng rng(mix_seed(seed, 0x5a4d504cULL));
  // partial Fisher-Yates: the first k slots become the sample
  for (std::size_t i = 0; i < k; ++i) {
    const auto j = i + static_cast<std::size_t>(uniform_index(rng, ids.size() - i));
    std::swap(ids[i], ids[j]);
  }
  std::vector<DesignPoint> out;
  out.reserve(k);
  for (std::size_t i = 0; i < k; ++i) out.push_back(space.point(ids[i]));
  return out;
}

}  // namespace flexibo
