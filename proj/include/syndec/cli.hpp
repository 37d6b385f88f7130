#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace syndec::cli {

/// Runs the command-line front end on the given arguments (without the
/// program name). Normal output goes to `out`, errors and usage text to
/// `err`. Returns the process exit code: 0 on success, 1 on validation
/// errors, 2 on solver failures, 64 for unknown subcommands or flags.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace syndec::cli
