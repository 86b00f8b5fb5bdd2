#pragma once

namespace microcell {

/// Full command-line entry point. Exit codes: 0 success (or valid verdict),
/// 1 completed with an invalid verdict or partial failure, 2 usage or
/// configuration error.
int run_cli(int argc, const char* const* argv);

}  // namespace microcell
