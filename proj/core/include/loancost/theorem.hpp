#pragma once

#include "loancost/model.hpp"

namespace loancost {

/// Balance and time thresholds that partition the compound-interest problem.
struct Thresholds {
    double x_lower;  ///< int_0^T e^{-(r+beta)s} m(s) ds: minimum payments repay anything below
    double x_upper;  ///< same with M: maximum payments cannot repay anything above
    double x_c;      ///< balance exactly repaid at T by max-min switching at t_c
    double x_hat;    ///< balance exactly repaid at t_c by maximum payments
    double t_c;      ///< critical horizon
    double t_star;
    double x_star;   ///< critical balance separating max-only from max-min
};

/// (T + ln(omega) / beta)^+, the time after which extra payments no longer pay for themselves.
[[nodiscard]] double critical_horizon(const LoanTerms& terms);

/// Unique t* in (t_c, T) balancing the forgone-tax-adjusted payment streams of max and min.
[[nodiscard]] double t_star(const LoanTerms& terms, const PaymentBounds& bounds);

/// x* = int_0^{t*} e^{-(r+beta)s} M(s) ds.
[[nodiscard]] double critical_balance(const LoanTerms& terms, const PaymentBounds& bounds);

[[nodiscard]] Thresholds thresholds(const LoanTerms& terms, const PaymentBounds& bounds);

/// Cost of the max-min strategy switching at t_c when it does not repay by T.
/// Affine in x with slope omega e^{beta T}.
[[nodiscard]] double value_v1(const LoanTerms& terms, const PaymentBounds& bounds, double x);

struct MaxOnlyValue {
    double value;
    double payoff_time;  ///< t_M
};

/// Cost of paying at the maximum rate until the loan is repaid. Requires x <= x_upper.
[[nodiscard]] MaxOnlyValue value_v2(const LoanTerms& terms, const PaymentBounds& bounds, double x);

struct CompoundOptimum {
    Strategy strategy;
    ValuationResult valuation;
    Thresholds thresholds;
};

/// Max-min at t_c when x > x*, max-only otherwise (ties go to max-only).
[[nodiscard]] CompoundOptimum optimal_strategy_compound(const LoanTerms& terms,
                                                        const PaymentBounds& bounds, double x);

/// Cost formula of the max-min strategy switching at t0, valid while it does not repay by T.
[[nodiscard]] double switch_cost_f(const LoanTerms& terms, const PaymentBounds& bounds, double x,
                                   double t0);

/// Cost of max on [0, t0] then min until repayment; t0 in [0, t_M].
[[nodiscard]] double switch_cost_g(const LoanTerms& terms, const PaymentBounds& bounds, double x,
                                   double t0);

}  // namespace loancost
