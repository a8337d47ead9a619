#pragma once

namespace flexibo {

/// Selects the serial reference path or the OpenMP path of a data-parallel
/// kernel. Both paths write to pre-sized per-index slots and produce
/// bit-identical results.
enum class Execution { serial, parallel };

}  // namespace flexibo
