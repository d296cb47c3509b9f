#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace scdl {

enum class ExitStatus : int {
    Success = 0,      // no error diagnostics
    Diagnostics = 1,  // error diagnostics emitted (or warnings under --deny-warnings)
    Usage = 2,        // usage or I/O failure
};

struct CliOptions {
    // ANSI-colored severities on the diagnostic stream.
    bool color = false;
};

/// Runs `scd` with `args` (program name excluded). Results go to `out`,
/// diagnostics and usage messages to `err`.
ExitStatus run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
                   const CliOptions& options = {});

}  // namespace scdl
