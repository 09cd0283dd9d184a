#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace ddestab {

// Command-line front end. Subcommands: analyze, sweep, simulate, legacy-diff,
// verify-critical. Exit codes: 0 ok, 2 config/usage error, 3 empty admissible
// domain, 4 certificate or verification failure.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ddestab
