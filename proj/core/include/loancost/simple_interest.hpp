#pragma once

#include <string_view>

#include "loancost/model.hpp"

namespace loancost {

/// First principal-repayment times: theta(alpha), theta(M), theta(m).
/// Each is T when the principal never drops below x.
struct PrincipalClock {
    double theta;
    double theta_of_max;
    double theta_of_min;
};

enum class RegimeClass {
    VeryLarge,     ///< theta(M) = T: minimum payments are optimal
    VerySmall,     ///< theta(m) = 0 and m nondecreasing: compound dynamics apply
    Intermediate,
};

[[nodiscard]] std::string_view to_string(RegimeClass regime) noexcept;

/// theta(alpha) under simple interest.
[[nodiscard]] double principal_clock(const LoanTerms& terms, double x, const Strategy& strategy,
                                     const PaymentBounds& bounds);
[[nodiscard]] PrincipalClock principal_clocks(const LoanTerms& terms, double x,
                                              const Strategy& strategy,
                                              const PaymentBounds& bounds);

[[nodiscard]] RegimeClass classify_regime(const LoanTerms& terms, double x,
                                          const PaymentBounds& bounds);

struct InterestPhaseResult {
    enum class Kind {
        Improved,          ///< min on [0, t0], max on (t0, theta], original tail
        MinOnlyDominates,  ///< theta(alpha) = T; `strategy` is min-only
    };
    Kind kind;
    Strategy strategy;
    double t0;
    double theta;
};

/// Moves payments made before the principal starts falling as late as possible while
/// keeping their undiscounted total, and hence theta, unchanged.
[[nodiscard]] InterestPhaseResult improve_interest_phase(const LoanTerms& terms, double x,
                                                         const Strategy& strategy,
                                                         const PaymentBounds& bounds);

struct PrincipalPhaseResult {
    enum class Kind {
        Improved,  ///< max on (a, u], min on (u, c]
        NoOp,      ///< already max-then-min on [a, c]
    };
    Kind kind;
    Strategy strategy;
    double s0;  ///< switch time with the same loan-rate-discounted payments on [a, c]
    double u;   ///< switch time reproducing the original balance at c
};

/// On a stretch [a, c] where the principal strictly falls, replaces the strategy by max then
/// min with the same balance at c. Throws DomainError when the preconditions fail.
/// When several switch times reproduce the balance, the largest is taken.
[[nodiscard]] PrincipalPhaseResult improve_principal_phase(const LoanTerms& terms, double x,
                                                           const Strategy& strategy,
                                                           const PaymentBounds& bounds, double a,
                                                           double c);

/// Cost of one more unit of balance when the borrower pays the minimum and the loan is forgiven.
[[nodiscard]] double marginal_cost(const LoanTerms& terms, InterestMode mode);

struct SimpleOptimum {
    Strategy strategy;
    ValuationResult valuation;
    RegimeClass regime;
    bool heuristic;  ///< true when the result comes from the structured search
    double t0;       ///< min -> max switch (searched family only)
    double t1;       ///< max -> min switch (searched family only)
    int evaluations;
};

/// Proven optimum in the very large and very small regimes; otherwise the best
/// min/max/min strategy on a grid_n simplex of switch times, polished locally.
[[nodiscard]] SimpleOptimum optimize_simple(const LoanTerms& terms, double x,
                                            const PaymentBounds& bounds, int grid_n = 96);

}  // namespace loancost
