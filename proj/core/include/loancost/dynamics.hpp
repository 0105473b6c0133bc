#pragma once

#include <limits>
#include <vector>

#include "loancost/model.hpp"

namespace loancost {

struct LoanState {
    double t;
    double balance;
    double principal;
};

/// Simple-interest regimes: while accruing, the principal is frozen and the balance moves
/// affinely in the cumulative payments; while amortizing, balance and principal coincide
/// and follow the compound-interest equation.
enum class Regime { Accruing, Amortizing };

/// Interval on which the simple-interest state has a single closed form.
struct Arc {
    double t0;
    double t1;
    Regime regime;
    double balance0;
    double principal;  ///< frozen principal while accruing; equals the balance while amortizing
    double coef;       ///< payment rate coef * exp(growth * t) on the arc
    double growth;
    double paid0;      ///< discounted payments accumulated before t0

    [[nodiscard]] double balance(double t, double loan_rate) const;
    [[nodiscard]] double discounted_paid(double t, double discount) const;
};

struct Propagation {
    LoanState state;
    double discounted_paid = 0.0;  ///< integral of e^{-r s} alpha_s over the propagated interval
    bool paid_off = false;
    /// First time the amortizing regime was entered; +inf if never.
    double first_amortization = std::numeric_limits<double>::infinity();
};

/// Event-exact propagation of db = ((r+beta) p - alpha) dt with p the running minimum of b,
/// from `from` to `to` or payoff, whichever comes first.
[[nodiscard]] Propagation propagate_simple(const LoanTerms& terms, const RateCurve& alpha,
                                           LoanState from, double to,
                                           std::vector<Arc>* arcs = nullptr,
                                           std::vector<TrajectoryEvent>* events = nullptr);

/// Closed-form propagation of db = ((r+beta) b - alpha) dt, stopping at payoff.
/// The returned principal is the balance.
[[nodiscard]] Propagation propagate_compound(const LoanTerms& terms, const RateCurve& alpha,
                                             LoanState from, double to);

/// e^{(r+beta)t} (x - int_0^t e^{-(r+beta)s} alpha_s ds), unclipped (may be negative).
[[nodiscard]] double balance_compound(const LoanTerms& terms, double x, const Strategy& strategy,
                                      const PaymentBounds& bounds, double t);
[[nodiscard]] double balance_compound(const LoanTerms& terms, double x, const RateCurve& alpha,
                                      double t);

struct StopTime {
    double tau;
    StopKind kind;
};

[[nodiscard]] StopTime payoff_time(const LoanTerms& terms, double x, const Strategy& strategy,
                                   const PaymentBounds& bounds, InterestMode mode);

/// Cost of an already-realized payment rate; the hot path for searches.
struct CostBreakdown {
    double cost;
    double tau;
    StopKind kind;
    double final_balance;  ///< balance at tau (0 when paid off)
    double theta;          ///< first principal repayment time (simple mode; T if never)
};

[[nodiscard]] CostBreakdown evaluate_cost(const LoanTerms& terms, double x, const RateCurve& alpha,
                                          InterestMode mode);

/// Present value J of the payments plus the discounted tax on any forgiven balance.
[[nodiscard]] ValuationResult cost(const LoanTerms& terms, double x, const Strategy& strategy,
                                   const PaymentBounds& bounds, InterestMode mode);

/// Sampled path every `step_hint` years, plus every regime change and the stop time.
[[nodiscard]] Trajectory simulate(const LoanTerms& terms, double x, const Strategy& strategy,
                                  const PaymentBounds& bounds, double step_hint, InterestMode mode);

[[nodiscard]] inline Trajectory simulate_simple(const LoanTerms& terms, double x,
                                                const Strategy& strategy,
                                                const PaymentBounds& bounds, double step_hint) {
    return simulate(terms, x, strategy, bounds, step_hint, InterestMode::Simple);
}

}  // namespace loancost
