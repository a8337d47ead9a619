#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

namespace flexibo {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One discrete configuration option. Values are either all numeric or all
/// categorical labels; numeric options are min-max scaled for the
/// surrogates, categorical ones by normalized index.
struct OptionDef {
  using Value = std::variant<double, std::string>;

  std::string name;
  std::vector<Value> values;

  bool is_numeric() const;
  std::size_t cardinality() const { return values.size(); }
  std::string label(std::size_t index) const;
};

struct DesignPoint {
  std::vector<std::size_t> indices;
  std::size_t flat_id = 0;

  friend bool operator==(const DesignPoint&, const DesignPoint&) = default;
};

inline constexpr std::size_t kDefaultMaxSpaceSize = 100'000;

/// Finite grid over the cross product of option values. Flat ids use a
/// mixed-radix encoding with the last option varying fastest.
class DesignSpace {
 public:
  explicit DesignSpace(std::vector<OptionDef> options,
                       std::size_t max_size = kDefaultMaxSpaceSize);

  const std::vector<OptionDef>& options() const { return options_; }
  std::size_t dimensions() const { return options_.size(); }
  std::size_t size() const { return size_; }

  DesignPoint point(std::size_t flat_id) const;
  DesignPoint point(std::vector<std::size_t> indices) const;
  std::size_t flat_id(std::span<const std::size_t> indices) const;

  /// Feature vector in [0,1]^m.
  std::vector<double> encode(const DesignPoint& p) const;
  std::vector<double> encode(std::size_t flat_id) const;
  /// Row-major |E| x m matrix of every encoded point.
  std::vector<std::vector<double>> encode_all() const;

  std::string describe(std::size_t flat_id) const;

 private:
  std::vector<OptionDef> options_;
  std::vector<std::size_t> strides_;
  std::size_t size_ = 1;
};

enum class Direction { maximize, minimize };

/// Objectives are maximized internally. A minimize objective is negated at
/// ingestion and negated back when reported.
struct ObjectiveSpec {
  std::string name;
  Direction direction = Direction::maximize;
  std::string unit;

  double to_internal(double reported) const {
    return direction == Direction::minimize ? -reported : reported;
  }
  double to_reported(double internal) const { return to_internal(internal); }
};

Direction parse_direction(std::string_view text);
std::string_view to_string(Direction d);

struct ParsedSpace {
  DesignSpace space;
  std::array<ObjectiveSpec, 2> objectives;
};

/// Reads the `options` and `objectives` sections of a configuration
/// document. Throws ConfigError on any schema violation.
ParsedSpace parse_space_json(const nlohmann::json& doc,
                        std::size_t max_size = kDefaultMaxSpaceSize);
ParsedSpace parse_space(std::string_view config_text,
                        std::size_t max_size = kDefaultMaxSpaceSize);

/// k distinct points drawn without replacement; deterministic in seed.
std::vector<DesignPoint> sample_random(const DesignSpace& space, std::size_t k,
                                       std::uint64_t seed);

}  // namespace flexibo
