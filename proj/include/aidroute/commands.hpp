#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace aidroute {

// Entry point of the `aidroute` tool. args excludes the program name.
// Returns the process exit code: 0 ok, 2 missing input, 3 malformed input,
// 4 no feasible plan, 5 too few routes, 1 anything else.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace aidroute
