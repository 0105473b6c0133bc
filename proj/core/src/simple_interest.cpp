#include "loancost/simple_interest.hpp"

#include <cmath>
#include <limits>
#include <set>

#include "loancost/dynamics.hpp"
#include "loancost/errors.hpp"
#include "loancost/numerics.hpp"
#include "loancost/theorem.hpp"
#include "loancost/parallel.hpp"

namespace loancost {

namespace {

constexpr numerics::RootOptions kTight{1e-13, 0.0, 400};

void require_positive(double x) {
    if (!std::isfinite(x) || !(x > 0.0)) throw DomainError("initial balance x must be > 0");
}

double theta_of(const LoanTerms& terms, double x, const RateCurve& alpha) {
    return evaluate_cost(terms, x, alpha, InterestMode::Simple).theta;
}

bool same_rate(double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(b)); }

// Switch time s if alpha is max on [a, s] and min on (s, c]; NaN otherwise.
double class_b_switch(const RateCurve& alpha, const PaymentBounds& bounds, double a, double c) {
    std::set<double> cuts{a, c};
    for (const auto* curve : {&alpha, &bounds.min_curve(), &bounds.max_curve()})
        for (const auto& p : curve->pieces())
            if (p.end > a && p.end < c) cuts.insert(p.end);
    double s = a;
    bool in_min = false;
    double prev = a;
    for (auto it = std::next(cuts.begin()); it != cuts.end(); ++it) {
        const double v = *it;
        const auto& pa = alpha.pieces()[alpha.piece_after(prev)];
        const auto& pm = bounds.min_curve().pieces()[bounds.min_curve().piece_after(prev)];
        const auto& pM = bounds.max_curve().pieces()[bounds.max_curve().piece_after(prev)];
        const bool is_max = same_rate(pa.value(prev), pM.value(prev)) && same_rate(pa.value(v), pM.value(v));
        const bool is_min = same_rate(pa.value(prev), pm.value(prev)) && same_rate(pa.value(v), pm.value(v));
        if (is_max && !in_min) {
            s = v;
        } else if (is_min) {
            in_min = true;
        } else {
            return std::numeric_limits<double>::quiet_NaN();
        }
        prev = v;
    }
    return s;
}

double golden_min(const auto& f, double lo, double hi, double& best_x, double best_f) {
    constexpr double inv_phi = 0.6180339887498949;
    if (!(hi > lo)) return best_f;
    double a = lo, b = hi;
    double c = b - inv_phi * (b - a), d = a + inv_phi * (b - a);
    double fc = f(c), fd = f(d);
    for (int i = 0; i < 48 && b - a > 1e-11; ++i) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    for (auto [x, fx] : {std::pair{c, fc}, std::pair{d, fd}}) {
        if (fx < best_f) {
            best_f = fx;
            best_x = x;
        }
    }
    return best_f;
}

}  // namespace

std::string_view to_string(RegimeClass regime) noexcept {
    switch (regime) {
        case RegimeClass::VeryLarge: return "very-large";
        case RegimeClass::VerySmall: return "very-small";
        case RegimeClass::Intermediate: return "intermediate";
    }
    return "intermediate";
}

double principal_clock(const LoanTerms& terms, double x, const Strategy& strategy,
                       const PaymentBounds& bounds) {
    require_positive(x);
    return theta_of(terms, x, realize(strategy, bounds));
}

PrincipalClock principal_clocks(const LoanTerms& terms, double x, const Strategy& strategy,
                                const PaymentBounds& bounds) {
    require_positive(x);
    require_coverage(terms, bounds);
    return {theta_of(terms, x, realize(strategy, bounds)), theta_of(terms, x, bounds.max_curve()),
            theta_of(terms, x, bounds.min_curve())};
}

RegimeClass classify_regime(const LoanTerms& terms, double x, const PaymentBounds& bounds) {
    require_positive(x);
    require_coverage(terms, bounds);
    const double T = terms.horizon();
    if (theta_of(terms, x, bounds.max_curve()) >= T) return RegimeClass::VeryLarge;
    if (theta_of(terms, x, bounds.min_curve()) <= 0.0 && bounds.min_nondecreasing())
        return RegimeClass::VerySmall;
    return RegimeClass::Intermediate;
}

InterestPhaseResult improve_interest_phase(const LoanTerms& terms, double x,
                                           const Strategy& strategy, const PaymentBounds& bounds) {
    require_positive(x);
    const double T = terms.horizon();
    const RateCurve alpha = realize(strategy, bounds);
    const double theta = theta_of(terms, x, alpha);
    if (theta >= T)
        return {InterestPhaseResult::Kind::MinOnlyDominates, Strategy::min_only(T), T, T};

    const auto& m = bounds.min_curve();
    const auto& M = bounds.max_curve();
    const double paid = alpha.integral(0.0, theta);
    auto gap = [&](double t0) { return m.integral(0.0, t0) + M.integral(t0, theta) - paid; };
    double t0;
    if (gap(0.0) <= 0.0)
        t0 = 0.0;
    else if (gap(theta) >= 0.0)
        t0 = theta;
    else
        t0 = numerics::find_root(gap, 0.0, theta, kTight).x;
    Strategy improved = strategy.overlay(0.0, theta, Strategy::min_max_min(t0, theta, T));
    return {InterestPhaseResult::Kind::Improved, std::move(improved), t0, theta};
}

PrincipalPhaseResult improve_principal_phase(const LoanTerms& terms, double x,
                                             const Strategy& strategy, const PaymentBounds& bounds,
                                             double a, double c) {
    require_positive(x);
    const double T = terms.horizon(), k = terms.loan_rate();
    if (!(a >= 0.0 && a < c && c <= T)) throw DomainError("need 0 <= a < c <= T");
    const RateCurve alpha = realize(strategy, bounds);

    std::vector<Arc> arcs;
    const auto whole = propagate_simple(terms, alpha, {0.0, x, x}, T, &arcs);
    const double theta = std::min(whole.first_amortization, T);
    if (theta > a + 1e-12) throw DomainError("interval starts before the principal falls");
    if (whole.paid_off && whole.state.t < c) throw DomainError("loan is repaid before c");
    for (const auto& arc : arcs) {
        const double lo = std::max(arc.t0, a), hi = std::min(arc.t1, c);
        if (hi - lo > 1e-10 && arc.regime != Regime::Amortizing)
            throw DomainError("principal is not strictly decreasing on [a, c]");
    }

    const double existing = class_b_switch(alpha, bounds, a, c);
    if (!std::isnan(existing))
        return {PrincipalPhaseResult::Kind::NoOp, strategy, existing, existing};

    const auto& m = bounds.min_curve();
    const auto& M = bounds.max_curve();
    const double target = alpha.integral(a, c, k);
    auto same_pv = [&](double s) { return M.integral(a, s, k) + m.integral(s, c, k) - target; };
    const double s0 = numerics::find_root(same_pv, a, c, kTight).x;

    const auto at_a = propagate_simple(terms, alpha, {0.0, x, x}, a).state;
    const double b_c = propagate_simple(terms, alpha, at_a, c).state.balance;
    auto modified = [&](double u) { return strategy.overlay(a, c, Strategy::max_min(u, T)); };
    auto gap = [&](double u) {
        const auto p = propagate_simple(terms, realize(modified(u), bounds), at_a, c);
        return (p.paid_off ? 0.0 : p.state.balance) - b_c;
    };

    double u = s0;
    const double g0 = gap(s0);
    if (g0 < -1e-12 * std::max(1.0, b_c)) {
        constexpr int kScan = 64;
        double hi_u = s0;
        bool found = false;
        for (int i = kScan - 1; i >= 0; --i) {
            const double lo_u = a + (s0 - a) * i / kScan;
            const double lo_g = gap(lo_u);
            if (lo_g >= 0.0) {
                u = lo_g == 0.0 ? lo_u : numerics::find_root(gap, lo_u, hi_u, kTight).x;
                found = true;
                break;
            }
            hi_u = lo_u;
        }
        if (!found) throw NumericalError("no switch time reproduces the balance at c");
    }
    return {PrincipalPhaseResult::Kind::Improved, modified(u), s0, u};
}

double marginal_cost(const LoanTerms& terms, InterestMode mode) {
    const double T = terms.horizon();
    if (mode == InterestMode::Compound) return terms.omega() * std::exp(terms.beta() * T);
    return terms.omega() * std::exp(-terms.r() * T) * (1.0 + terms.loan_rate() * T);
}

SimpleOptimum optimize_simple(const LoanTerms& terms, double x, const PaymentBounds& bounds,
                              int grid_n) {
    require_positive(x);
    if (grid_n < 2 || grid_n > 4096) throw InvalidArgument("grid_n must lie in [2, 4096]");
    const double T = terms.horizon();
    const RegimeClass regime = classify_regime(terms, x, bounds);

    if (regime == RegimeClass::VeryLarge) {
        Strategy s = Strategy::min_only(T);
        auto v = cost(terms, x, s, bounds, InterestMode::Simple);
        return {std::move(s), std::move(v), regime, false, T, T, 1};
    }
    if (regime == RegimeClass::VerySmall) {
        auto opt = optimal_strategy_compound(terms, bounds, x);
        auto v = cost(terms, x, opt.strategy, bounds, InterestMode::Simple);
        const auto sw = opt.strategy.switch_times();
        const double t1 = opt.strategy.label() == "min-only" ? 0.0 : (sw.empty() ? T : sw.front());
        return {opt.strategy, std::move(v), regime, false, 0.0, t1, 1};
    }

    auto eval = [&](double t0, double t1) {
        return evaluate_cost(terms, x, realize(Strategy::min_max_min(t0, t1, T), bounds),
                             InterestMode::Simple)
            .cost;
    };

    // candidates (i, j) with i <= j, row-major; reduction in index order keeps ties deterministic
    const auto n = static_cast<std::size_t>(grid_n);
    std::vector<std::pair<std::size_t, std::size_t>> cells;
    cells.reserve((n + 1) * (n + 2) / 2);
    for (std::size_t i = 0; i <= n; ++i)
        for (std::size_t j = i; j <= n; ++j) cells.emplace_back(i, j);
    const double h = T / static_cast<double>(n);
    std::vector<double> costs(cells.size());
    parallel_for(cells.size(), [&](std::size_t idx) {
        costs[idx] = eval(h * static_cast<double>(cells[idx].first),
                          h * static_cast<double>(cells[idx].second));
    });
    std::size_t best = 0;
    for (std::size_t idx = 1; idx < costs.size(); ++idx)
        if (costs[idx] < costs[best]) best = idx;
    double t0 = h * static_cast<double>(cells[best].first);
    double t1 = h * static_cast<double>(cells[best].second);
    double best_cost = costs[best];
    int evaluations = static_cast<int>(costs.size());

    auto counted = [&](auto f) {
        return [&, f](double v) {
            ++evaluations;
            return f(v);
        };
    };
    for (int round = 0; round < 4; ++round) {
        const double before = best_cost;
        const double fixed1 = t1;
        best_cost = golden_min(counted([&](double v) { return eval(v, fixed1); }),
                               std::max(0.0, t0 - h), std::min(t1, t0 + h), t0, best_cost);
        const double fixed0 = t0;
        best_cost = golden_min(counted([&](double v) { return eval(fixed0, v); }),
                               std::max(t0, t1 - h), std::min(T, t1 + h), t1, best_cost);
        if (before - best_cost <= 1e-13 * std::max(1.0, best_cost)) break;
    }

    Strategy s = Strategy::min_max_min(t0, t1, T);
    auto v = cost(terms, x, s, bounds, InterestMode::Simple);
    // switches after payoff change nothing; report the shortest equivalent strategy
    if (v.stop_kind == StopKind::PaidOff && v.tau <= t1) {
        if (v.tau <= t0) t0 = T;
        t1 = T;
        s = Strategy::min_max_min(t0, t1, T);
        v.strategy = s;
    }
    return {std::move(s), std::move(v), regime, true, t0, t1, evaluations};
}

}  // namespace loancost
