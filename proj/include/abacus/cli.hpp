/**
 * This code is licensed under the Apache License, Version 2.0. You may
 * obtain a copy of this license at http://www.apache.org/licenses/LICENSE-2.0.
 */

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace abacus {

// Runs the tool on argv-style arguments (program name excluded), writing to
// the given streams. Returns the process exit code: 0 clean, 1 usage or
// input error, 2 constraint violation.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace abacus
