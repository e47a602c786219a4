#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace pointint {

/// Exit codes: 0 success, 1 failed check or computation error, 2 usage or
/// config error. `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pointint
