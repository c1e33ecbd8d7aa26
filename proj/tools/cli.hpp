#pragma once

#include <string>
#include <vector>

namespace shrinkerlab::cli {

// Exit codes: 0 all hard invariants pass, 1 numerical abort or failed
// invariant, 2 usage error. Soft inequality reports never fail the process.
int run_command(const std::vector<std::string>& args);

}  // namespace shrinkerlab::cli
