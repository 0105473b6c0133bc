#pragma once

#include <ostream>

namespace loancost::app {

/// Entry point of the `loancost` command. Exit codes: 0 success, 1 failed verification,
/// 2 invalid usage or config, 3 out-of-domain input, 4 I/O failure.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace loancost::app
