#pragma once

// Reference computations that share no numerical code with the library:
// fixed-step Runge-Kutta for the balance ODEs, midpoint Riemann sums, plain bisection.

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <set>
#include <variant>
#include <vector>

#include "loancost/model.hpp"

namespace oracle {

using loancost::LoanTerms;
using loancost::PaymentBounds;
using loancost::Strategy;

/// Rate prescribed by `s` at time t (left-continuous), evaluated straight from the bounds.
inline double rate(const Strategy& s, const PaymentBounds& b, double t) {
    double prev = 0.0;
    for (const auto& seg : s.segments()) {
        if (t <= seg.end || &seg == &s.segments().back()) {
            return std::visit(
                [&](const auto& p) -> double {
                    using P = std::decay_t<decltype(p)>;
                    if constexpr (std::is_same_v<P, loancost::MinRate>)
                        return b.min_rate(t);
                    else if constexpr (std::is_same_v<P, loancost::MaxRate>)
                        return b.max_rate(t);
                    else if constexpr (std::is_same_v<P, loancost::ConstantRate>)
                        return p.level;
                    else {
                        std::size_t i = 0;
                        while (i + 2 < p.times.size() && t > p.times[i + 1]) ++i;
                        return p.values[i];
                    }
                },
                seg.policy);
        }
        prev = seg.end;
    }
    (void)prev;
    return 0.0;
}

/// Every time the rate can jump: segment ends, tabulated grids, tabulated bounds.
inline std::vector<double> breakpoints(const Strategy& s, const PaymentBounds& b, double T) {
    std::set<double> cuts{0.0, T};
    for (const auto& seg : s.segments()) {
        cuts.insert(seg.end);
        if (const auto* tab = std::get_if<loancost::TabulatedRate>(&seg.policy))
            for (double t : tab->times) cuts.insert(t);
    }
    if (const auto* tab = std::get_if<loancost::TabulatedBounds>(&b.representation()))
        for (double t : tab->times) cuts.insert(t);
    std::vector<double> out;
    for (double c : cuts)
        if (c >= 0.0 && c <= T) out.push_back(c);
    return out;
}

/// Compound balance by RK4 between breakpoints, no stopping at zero.
inline double rk4_compound(const LoanTerms& terms, double x, const Strategy& s,
                           const PaymentBounds& b, double t_end, double h = 1e-3) {
    const double k = terms.loan_rate();
    const auto cuts = breakpoints(s, b, terms.horizon());
    double y = x;
    for (std::size_t i = 0; i + 1 < cuts.size() && cuts[i] < t_end; ++i) {
        const double lo = cuts[i], hi = std::min(cuts[i + 1], t_end);
        const int n = std::max(1, static_cast<int>(std::ceil((hi - lo) / h)));
        const double step = (hi - lo) / n;
        // evaluate the rate strictly inside the piece so jumps at the ends are never sampled
        const double eps = 1e-12 * std::max(1.0, hi);
        auto f = [&](double t, double yy) {
            return k * yy - rate(s, b, std::clamp(t, lo + eps, hi));
        };
        for (int j = 0; j < n; ++j) {
            const double t = lo + j * step;
            const double k1 = f(t, y);
            const double k2 = f(t + step / 2, y + step / 2 * k1);
            const double k3 = f(t + step / 2, y + step / 2 * k2);
            const double k4 = f(t + step, y + step * k3);
            y += step / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
        }
    }
    return y;
}

struct SimplePath {
    std::vector<double> t, b, p;
};

/// Simple-interest path by small explicit steps with p = running min of b. First order.
inline SimplePath euler_simple(const LoanTerms& terms, double x, const Strategy& s,
                               const PaymentBounds& b, double h = 1e-4) {
    const double k = terms.loan_rate(), T = terms.horizon();
    SimplePath path;
    double bal = x, p = x;
    const int n = static_cast<int>(std::ceil(T / h));
    for (int j = 0; j <= n; ++j) {
        const double t = std::min(T, j * h);
        path.t.push_back(t);
        path.b.push_back(bal);
        path.p.push_back(p);
        if (bal <= 0.0 || j == n) break;
        const double mid = std::min(T, t + h / 2);
        bal += (k * p - rate(s, b, mid)) * h;
        p = std::min(p, bal);
    }
    return path;
}

/// Midpoint rule for the integral of f over [a, b] with step h.
inline double riemann(const std::function<double(double)>& f, double a, double b, double h) {
    if (!(b > a)) return 0.0;
    const long n = std::max(1L, static_cast<long>(std::ceil((b - a) / h)));
    const double step = (b - a) / n;
    double sum = 0.0;
    for (long i = 0; i < n; ++i) sum += f(a + (i + 0.5) * step);
    return sum * step;
}

inline double bisect(const std::function<double(double)>& f, double lo, double hi, int iters = 200) {
    double flo = f(lo);
    for (int i = 0; i < iters; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if ((fm < 0) == (flo < 0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

struct Instance {
    LoanTerms terms;
    PaymentBounds bounds;
};

/// Random terms with exponential income bounds (nondecreasing) or a random step table.
inline Instance draw_instance(std::mt19937_64& rng, bool allow_tabulated = true) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const LoanTerms terms(0.01 + 0.05 * u(rng), 0.01 + 0.07 * u(rng), 0.15 + 0.6 * u(rng),
                          8.0 + 22.0 * u(rng));
    if (allow_tabulated && u(rng) < 0.3) {
        const int n = 2 + static_cast<int>(4 * u(rng));
        std::vector<double> times{0.0}, lo, hi;
        for (int i = 1; i < n; ++i) times.push_back(terms.horizon() * i / n + 0.3 * u(rng));
        times.push_back(terms.horizon());
        for (int i = 0; i < n; ++i) {
            const double m = 2.0 + 6.0 * u(rng);
            lo.push_back(m);
            hi.push_back(m * (1.5 + 2.0 * u(rng)));
        }
        return {terms, PaymentBounds::tabulated({times, lo, hi})};
    }
    const double cap = 20.0 + 60.0 * u(rng);
    const double f_min = 0.05 + 0.1 * u(rng);
    return {terms, PaymentBounds::exponential_income(
                       {32.0 + cap, 32.0, 0.05 * u(rng), f_min, f_min + 0.05 + 0.25 * u(rng)})};
}

/// Random admissible piecewise strategy of min, max, constant and tabulated pieces.
inline Strategy draw_strategy(std::mt19937_64& rng, const Instance& in, int max_segments = 6) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double T = in.terms.horizon();
    const int n = 1 + static_cast<int>(u(rng) * max_segments);
    std::vector<double> ends;
    for (int i = 0; i + 1 < n; ++i) ends.push_back(T * u(rng));
    std::sort(ends.begin(), ends.end());
    std::vector<double> kept;
    for (double e : ends)
        if (e > 1e-3 && (kept.empty() || e - kept.back() > 1e-3) && T - e > 1e-3) kept.push_back(e);
    kept.push_back(T);
    // feasible constant band on [a, e]: above every m and below every M on it
    auto band = [&](double a, double e) {
        double lo = 0.0, hi = 1e300;
        for (int j = 0; j <= 64; ++j) {
            const double t = a + (e - a) * j / 64.0;
            for (double tt : {t, std::min(e, t + 1e-9)}) {
                lo = std::max(lo, in.bounds.min_rate(tt));
                hi = std::min(hi, in.bounds.max_rate(tt));
            }
        }
        lo = std::max(lo, in.bounds.min_curve().right_value(a));
        hi = std::min(hi, in.bounds.max_curve().right_value(a));
        return std::pair{lo, hi};
    };
    std::vector<loancost::StrategySegment> segs;
    double start = 0.0;
    for (double e : kept) {
        const double pick = u(rng);
        const auto [lo, hi] = band(start, e);
        if (pick < 0.3 || !(hi > lo)) {
            segs.push_back({e, loancost::MinRate{}});
        } else if (pick < 0.6) {
            segs.push_back({e, loancost::MaxRate{}});
        } else if (pick < 0.85) {
            segs.push_back({e, loancost::ConstantRate{lo + (hi - lo) * (0.02 + 0.96 * u(rng))}});
        } else {
            const double mid = start + (e - start) * (0.2 + 0.6 * u(rng));
            const auto b1 = band(start, mid), b2 = band(mid, e);
            if (b1.second > b1.first && b2.second > b2.first) {
                segs.push_back({e, loancost::TabulatedRate{
                                       {start, mid, e},
                                       {b1.first + (b1.second - b1.first) * u(rng),
                                        b2.first + (b2.second - b2.first) * u(rng)}}});
            } else {
                segs.push_back({e, loancost::MaxRate{}});
            }
        }
        start = e;
    }
    return Strategy(std::move(segs), T);
}

}  // namespace oracle
