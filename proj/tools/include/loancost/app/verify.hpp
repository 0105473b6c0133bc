#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace loancost::app {

/// theorem-vs-dp, comparison, marginal, improvement, monotonicity.
[[nodiscard]] const std::vector<std::string>& verify_suites();

/// Runs one suite (or "all"), writing one PASS/FAIL line per check. Returns true if all pass.
/// Throws std::invalid_argument for an unknown suite name.
bool run_verify(const std::string& suite, std::ostream& out);

}  // namespace loancost::app
