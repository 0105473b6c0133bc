#pragma once

#include <cmath>
#include <string>
#include <utility>

#include "loancost/errors.hpp"

namespace loancost::numerics {

/// Time tolerance used for bracketed roots unless a caller asks for tighter.
inline constexpr double kTimeTolerance = 1e-10;

/// Integral of exp(rate * s) over [0, length], stable as rate * length -> 0.
[[nodiscard]] inline double exp_integral(double rate, double length) noexcept {
    const double z = rate * length;
    if (z == 0.0) return length;
    if (std::abs(z) < 1e-300) return length;
    return length * (std::expm1(z) / z);
}

/// Integral of exp(rate * s) over [a, b].
[[nodiscard]] inline double exp_integral(double rate, double a, double b) noexcept {
    return std::exp(rate * a) * exp_integral(rate, b - a);
}

struct RootOptions {
    double x_tol = kTimeTolerance;  ///< stop once the bracket is this narrow
    double f_tol = 0.0;             ///< stop once |f| is at most this
    int max_iter = 400;
};

struct Root {
    double x;    ///< best estimate
    double fx;
    double lo;   ///< final bracket, f(lo) has the sign of f at the original lower end
    double hi;
    int iterations;
};

/// Bracket-preserving root finder: secant steps, falling back to bisection
/// whenever a secant step fails to halve the bracket.
///
/// Requires f(lo) and f(hi) to have opposite signs (a zero at either end is accepted).
template <class F>
[[nodiscard]] Root find_root(F&& f, double lo, double hi, const RootOptions& opt = {}) {
    double a = lo, b = hi;
    double fa = f(a), fb = f(b);
    if (fa == 0.0) return {a, fa, a, a, 0};
    if (fb == 0.0) return {b, fb, b, b, 0};
    if (std::isnan(fa) || std::isnan(fb) || std::signbit(fa) == std::signbit(fb)) {
        throw NumericalError("find_root: root not bracketed on [" + std::to_string(lo) + ", " +
                             std::to_string(hi) + "] (f = " + std::to_string(fa) + ", " +
                             std::to_string(fb) + ")");
    }
    bool use_secant = true;
    int it = 0;
    for (; it < opt.max_iter; ++it) {
        const double width = b - a;
        if (width <= opt.x_tol) break;
        const double mid = a + 0.5 * width;
        double trial = mid;
        if (use_secant) {
            const double s = b - fb * (b - a) / (fb - fa);
            if (s > a && s < b) trial = s;
        }
        if (trial <= a || trial >= b) break;  // no representable progress left
        const double ft = f(trial);
        if (ft == 0.0 || std::abs(ft) <= opt.f_tol) return {trial, ft, trial, trial, it + 1};
        if (std::signbit(ft) == std::signbit(fa)) {
            a = trial;
            fa = ft;
        } else {
            b = trial;
            fb = ft;
        }
        use_secant = (b - a) <= 0.5 * width;
    }
    const bool take_a = std::abs(fa) <= std::abs(fb);
    return {take_a ? a : b, take_a ? fa : fb, a, b, it};
}

namespace detail {

template <class F>
double simpson_step(F& f, double a, double b, double fa, double fm, double fb, double whole,
                    double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    return simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

/// Adaptive Simpson quadrature with Richardson correction.
template <class F>
[[nodiscard]] double integrate_adaptive(F&& f, double a, double b, double abs_tol = 1e-10,
                                        int max_depth = 50) {
    if (b == a) return 0.0;
    if (b < a) return -integrate_adaptive(f, b, a, abs_tol, max_depth);
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return detail::simpson_step(f, a, b, fa, fm, fb, whole, abs_tol, max_depth);
}

}  // namespace loancost::numerics
