#pragma once

#include <iosfwd>

namespace flexibo {

/// Entry point for the `flexibo` tool. Returns the process exit status: 0
/// iff every requested run completed.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace flexibo
