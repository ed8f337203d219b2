#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace tangleroof {

// Command-line front end, callable in-process for tests. `args` excludes the
// program name. Exit codes: 0 success, 2 validation or usage error, 3 failed
// verification table.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace tangleroof
