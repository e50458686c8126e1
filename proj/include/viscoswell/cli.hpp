#pragma once

#include <ostream>

namespace viscoswell::cli {

/// Entry point shared by the executable and the tests. Subcommands: run,
/// converge, compare, presets. Returns 0 on success, 2 for configuration
/// errors, 3 for numeric failures, 4 for non-convergence.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace viscoswell::cli
