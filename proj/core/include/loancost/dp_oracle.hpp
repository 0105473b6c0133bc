#pragma once

#include "loancost/model.hpp"

namespace loancost {

inline constexpr int kDpMaxTimeSteps = 64;
inline constexpr int kDpMaxStateCells = 128;

struct DpResult {
    double cost;               ///< discretized value at (0, x)
    Strategy policy;           ///< bang-bang policy traced forward from (0, x)
    double policy_cost;        ///< exact cost of `policy`
    double refinement_delta;   ///< |cost - cost at half the time steps|
    int time_steps;
    int state_cells;
    InterestMode mode;
};

/// Backward induction over a (balance, principal) grid with controls {m, M} on each step.
/// Compound mode only needs the balance axis. Throws ResourceLimitError past
/// kDpMaxTimeSteps steps or kDpMaxStateCells cells per axis.
[[nodiscard]] DpResult dp_oracle(const LoanTerms& terms, double x, const PaymentBounds& bounds,
                                 int time_steps, int state_cells,
                                 InterestMode mode = InterestMode::Compound);

}  // namespace loancost
