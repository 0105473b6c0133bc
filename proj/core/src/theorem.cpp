#include "loancost/theorem.hpp"

#include <cmath>

#include "loancost/dynamics.hpp"
#include "loancost/errors.hpp"
#include "loancost/numerics.hpp"

namespace loancost {

namespace {

constexpr numerics::RootOptions kTight{1e-13, 0.0, 400};

void require_positive(double x) {
    if (!std::isfinite(x) || !(x > 0.0)) throw DomainError("initial balance x must be > 0");
}

// int_a^b e^{-rs} f(s) (1 - omega e^{beta (T - s)}) ds
double tax_adjusted(const LoanTerms& terms, const RateCurve& f, double a, double b) {
    const double scale = terms.omega() * std::exp(terms.beta() * terms.horizon());
    return f.integral(a, b, terms.r()) - scale * f.integral(a, b, terms.loan_rate());
}

double max_payoff_time(const LoanTerms& terms, const PaymentBounds& bounds, double x) {
    const double k = terms.loan_rate();
    const auto& M = bounds.max_curve();
    const double T = terms.horizon();
    const double capacity = M.integral(0.0, T, k);
    if (x > capacity)
        throw DomainError("maximum payments cannot repay the balance before forgiveness");
    if (x == capacity) return T;
    return numerics::find_root([&](double t) { return M.integral(0.0, t, k) - x; }, 0.0, T, kTight)
        .x;
}

}  // namespace

double critical_horizon(const LoanTerms& terms) {
    return std::max(0.0, terms.horizon() + std::log(terms.omega()) / terms.beta());
}

double t_star(const LoanTerms& terms, const PaymentBounds& bounds) {
    require_coverage(terms, bounds);
    const double T = terms.horizon();
    const double tc = critical_horizon(terms);
    const double rhs = tax_adjusted(terms, bounds.min_curve(), tc, T);
    auto f = [&](double t) { return tax_adjusted(terms, bounds.max_curve(), tc, t) - rhs; };
    // f(t_c) = -rhs < 0 and f(T) > 0 because M > m and the weight is positive past t_c
    const auto root = numerics::find_root(f, tc, T, kTight);
    return root.x;
}

double critical_balance(const LoanTerms& terms, const PaymentBounds& bounds) {
    return bounds.max_curve().integral(0.0, t_star(terms, bounds), terms.loan_rate());
}

Thresholds thresholds(const LoanTerms& terms, const PaymentBounds& bounds) {
    require_coverage(terms, bounds);
    const double k = terms.loan_rate(), T = terms.horizon();
    const auto& m = bounds.min_curve();
    const auto& M = bounds.max_curve();
    Thresholds th{};
    th.t_c = critical_horizon(terms);
    th.x_lower = m.integral(0.0, T, k);
    th.x_upper = M.integral(0.0, T, k);
    th.x_hat = M.integral(0.0, th.t_c, k);
    th.x_c = th.x_hat + m.integral(th.t_c, T, k);
    th.t_star = t_star(terms, bounds);
    th.x_star = M.integral(0.0, th.t_star, k);
    return th;
}

double value_v1(const LoanTerms& terms, const PaymentBounds& bounds, double x) {
    require_positive(x);
    require_coverage(terms, bounds);
    const double r = terms.r(), k = terms.loan_rate(), T = terms.horizon();
    const double tc = critical_horizon(terms);
    const auto& m = bounds.min_curve();
    const auto& M = bounds.max_curve();
    const double paid = M.integral(0.0, tc, r) + m.integral(tc, T, r);
    const double repaid = M.integral(0.0, tc, k) + m.integral(tc, T, k);
    return paid + terms.omega() * std::exp(terms.beta() * T) * (x - repaid);
}

MaxOnlyValue value_v2(const LoanTerms& terms, const PaymentBounds& bounds, double x) {
    require_positive(x);
    require_coverage(terms, bounds);
    const double tM = max_payoff_time(terms, bounds, x);
    return {bounds.max_curve().integral(0.0, tM, terms.r()), tM};
}

CompoundOptimum optimal_strategy_compound(const LoanTerms& terms, const PaymentBounds& bounds,
                                          double x) {
    require_positive(x);
    const Thresholds th = thresholds(terms, bounds);
    const double T = terms.horizon();
    const bool max_min = x > th.x_star;
    Strategy strategy = max_min ? Strategy::max_min(th.t_c, T) : Strategy::max_only(T);
    ValuationResult valuation = cost(terms, x, strategy, bounds, InterestMode::Compound);
    valuation.cost = max_min ? value_v1(terms, bounds, x) : value_v2(terms, bounds, x).value;
    return {std::move(strategy), std::move(valuation), th};
}

double switch_cost_f(const LoanTerms& terms, const PaymentBounds& bounds, double x, double t0) {
    require_positive(x);
    require_coverage(terms, bounds);
    const double r = terms.r(), k = terms.loan_rate(), T = terms.horizon();
    if (!(t0 >= 0.0 && t0 <= T)) throw DomainError("switch time must lie in [0, T]");
    const auto& m = bounds.min_curve();
    const auto& M = bounds.max_curve();
    return M.integral(0.0, t0, r) + m.integral(t0, T, r) +
           terms.omega() * std::exp(terms.beta() * T) *
               (x - M.integral(0.0, t0, k) - m.integral(t0, T, k));
}

double switch_cost_g(const LoanTerms& terms, const PaymentBounds& bounds, double x, double t0) {
    require_positive(x);
    require_coverage(terms, bounds);
    const double r = terms.r(), k = terms.loan_rate(), T = terms.horizon();
    const double tM = max_payoff_time(terms, bounds, x);
    if (!(t0 >= 0.0 && t0 <= tM)) throw DomainError("switch time must lie in [0, t_M]");
    const auto& m = bounds.min_curve();
    const auto& M = bounds.max_curve();
    const double head = M.integral(0.0, t0, k);
    const double remaining = x - head;
    if (!(remaining > 0.0)) return M.integral(0.0, t0, r);
    if (m.integral(t0, T, k) < remaining)
        throw DomainError("minimum payments after the switch cannot repay before forgiveness");
    const double tau =
        numerics::find_root([&](double t) { return m.integral(t0, t, k) - remaining; }, t0, T,
                            kTight)
            .x;
    return M.integral(0.0, t0, r) + m.integral(t0, tau, r);
}

}  // namespace loancost
