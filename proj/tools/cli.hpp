#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace memsynth::cli {

/// Runs one memsynth invocation. `args` excludes the program name.
/// Returns the process exit code; 0 iff no error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace memsynth::cli
