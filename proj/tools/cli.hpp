#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rotkit::cli {

/// Process exit codes.
enum Exit : int {
    ok = 0,
    invalid_params = 2,
    convergence_failure = 3,
    unresolved = 4,
};

/// Runs the tool on argv[1..] and returns the exit code. Data goes to `out`
/// (unless --out names a file), diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace rotkit::cli
