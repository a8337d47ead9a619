#pragma once

#include <filesystem>
#include <optional>
#include <string_view>

#include <json.hpp>

#include "flexibo/design_space.hpp"
#include "flexibo/optimizer.hpp"

namespace flexibo {

/// Harness defaults: T = 200, 15 initial points, 5 seeds, epsilon fraction
/// 0.00004, delta 0.05, div 10.
struct Config {
  std::optional<ParsedSpace> space;  // present when the document has `options`
  RunSettings run;                   // run.costs holds the `costs` section
  std::size_t seeds = 5;
  std::size_t div = 10;
  double noise_std = 0.0;
  std::size_t jobs = 1;
};

/// Reads the `options`, `objectives`, `costs` and `optimizer` sections.
/// Unknown keys are rejected. With require_space, `options` and
/// `objectives` must be present.
Config parse_config(const nlohmann::json& doc, bool require_space = false);
Config parse_config_text(std::string_view text, bool require_space = false);
Config load_config(const std::filesystem::path& path, bool require_space = false);

SurrogateKind parse_surrogate(std::string_view text);
std::string_view to_string(SurrogateKind kind);

}  // namespace flexibo
