#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace emsep::cli {

inline constexpr const char* kToolVersion = "0.1.0";

enum ExitCode : int { ok = 0, config_error = 1, numeric_error = 2, io_error = 3 };

/// Runs one invocation; args exclude the program name. Reports go to the
/// output directory, summaries to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace emsep::cli
