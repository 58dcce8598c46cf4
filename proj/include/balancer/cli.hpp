#pragma once

namespace balancer {

/// Exit codes: 0 success, 2 input/validation error, 3 internal invariant
/// violation, 1 anything else.
int run_cli(int argc, const char *const *argv);

}  // namespace balancer
