#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "mdl/error.hpp"

namespace mdl::cli {

enum ExitCode : int {
  exit_ok = 0,
  exit_internal = 1,
  exit_usage = 2,  // bad arguments or unreadable input
  exit_infeasible = 3,
  exit_cap = 4,
  exit_non_convergence = 5,
  exit_empty = 6,
};

int exit_code_for(ErrorCode code) noexcept;

const char* version() noexcept;

// Runs maxent-mdl on the arguments that follow the program name. Results go
// to `out`, diagnostics to `err`; the return value is the exit status.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mdl::cli
