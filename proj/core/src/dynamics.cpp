#include "loancost/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "loancost/errors.hpp"
#include "loancost/numerics.hpp"

namespace loancost {

namespace {

using numerics::exp_integral;
using numerics::find_root;

// Event times are resolved well below the 1e-10 year requirement so that
// quantities derived from two independent event searches still agree to it.
constexpr numerics::RootOptions kEventRoot{1e-12, 0.0, 400};

void require_positive_balance(double x) {
    if (!std::isfinite(x) || !(x > 0.0)) throw DomainError("initial balance x must be > 0");
}

class SimpleRun {
public:
    SimpleRun(const LoanTerms& terms, const RateCurve& alpha, LoanState from,
              std::vector<Arc>* arcs, std::vector<TrajectoryEvent>* events)
        : k_(terms.loan_rate()), r_(terms.r()), alpha_(alpha), s_(from), arcs_(arcs),
          events_(events) {}

    Propagation run(double to) {
        if (to > s_.t && !(s_.balance > 0.0)) paid_off_ = true;
        while (!paid_off_ && s_.t < to) {
            const auto& p = alpha_.pieces()[alpha_.piece_after(s_.t)];
            const double end = std::min(p.end, to);
            run_piece(p.coef, p.growth, end);
            if (!paid_off_) s_.t = end;  // absorb round-off at the breakpoint
        }
        return {s_, paid_, paid_off_, first_amortization_};
    }

private:
    bool starts_amortizing(double c, double g, double t) const {
        const double phi = c * std::exp(g * t) - k_ * s_.principal;
        return phi > 0.0 || (phi == 0.0 && g > 0.0);
    }

    void run_piece(double c, double g, double end) {
        std::optional<Regime> forced;
        int stalls = 0;
        while (!paid_off_ && s_.t < end) {
            const double t1 = s_.t;
            Regime regime;
            if (forced) {
                regime = *forced;
            } else if (s_.balance <= s_.principal) {
                regime = starts_amortizing(c, g, t1) ? Regime::Amortizing : Regime::Accruing;
            } else {
                regime = Regime::Accruing;
            }
            forced.reset();
            if (regime == Regime::Amortizing)
                forced = amortize(c, g, end);
            else
                forced = accrue(c, g, end);
            if (s_.t == t1 && !paid_off_ && ++stalls > 4)
                throw NumericalError("simple-interest propagation stalled at t = " + std::to_string(t1));
        }
    }

    void push_arc(double t0, double t1, Regime regime, double b0, double principal, double c,
                  double g, double paid0) {
        if (arcs_ && t1 > t0) arcs_->push_back({t0, t1, regime, b0, principal, c, g, paid0});
    }

    void push_event(double t, EventKind kind) {
        if (events_) events_->push_back({t, kind});
    }

    // Principal frozen at P; returns Amortizing if the balance falls back onto the principal.
    std::optional<Regime> accrue(double c, double g, double end) {
        const double P = s_.principal, b1 = s_.balance, t1 = s_.t;
        const double kP = k_ * P;
        last_ = Regime::Accruing;
        auto h = [&](double t) { return (b1 - P) + kP * (t - t1) - c * exp_integral(g, t1, t); };

        // h' = kP - c e^{gt} changes sign at most once
        double cuts[3] = {t1, end, end};
        int n_cuts = 2;
        if (g != 0.0 && c > 0.0 && kP > 0.0) {
            const double ts = std::log(kP / c) / g;
            if (ts > t1 && ts < end) {
                cuts[1] = ts;
                cuts[2] = end;
                n_cuts = 3;
            }
        }
        double crossing = std::numeric_limits<double>::quiet_NaN();
        for (int i = 0; i + 1 < n_cuts; ++i) {
            const double u = cuts[i], v = cuts[i + 1];
            const double mid = 0.5 * (u + v);
            if (kP - c * std::exp(g * mid) >= 0.0) continue;  // h nondecreasing here
            const double hv = h(v);
            if (!(hv < 0.0)) continue;
            const double hu = h(u);
            if (hu <= 0.0) {
                crossing = u;
            } else {
                const auto root = find_root(h, u, v, kEventRoot);
                crossing = root.fx < 0.0 ? root.x : root.hi;
            }
            break;
        }
        const bool crosses = !std::isnan(crossing);
        const double stop = crosses ? crossing : end;
        push_arc(t1, stop, Regime::Accruing, b1, P, c, g, paid_);
        paid_ += c * exp_integral(g - r_, t1, stop);
        if (crosses) {
            s_ = {stop, P, P};
            return Regime::Amortizing;
        }
        s_ = {end, std::max(P, b1 + kP * (end - t1) - c * exp_integral(g, t1, end)), P};
        return std::nullopt;
    }

    // Balance equals principal and both decline; returns Accruing if payments drop below interest.
    std::optional<Regime> amortize(double c, double g, double end) {
        const double B = s_.balance, t1 = s_.t;
        const double a1 = c * std::exp(g * t1);
        auto bal = [&](double t) {
            const double d = t - t1;
            return std::exp(k_ * d) * (B - a1 * exp_integral(g - k_, d));
        };
        auto phi = [&](double t) { return c * std::exp(g * t) - k_ * bal(t); };

        if (std::isinf(first_amortization_)) first_amortization_ = t1;
        if (last_ != Regime::Amortizing) push_event(t1, EventKind::PrincipalStartsFalling);
        last_ = Regime::Amortizing;

        double exit = end;
        bool exits = false;
        if (phi(end) < 0.0) {
            exits = true;
            if (phi(t1) <= 0.0) {
                exit = t1;
            } else {
                const auto root = find_root(phi, t1, end, kEventRoot);
                exit = root.fx < 0.0 ? root.x : root.hi;
            }
        }
        const double b_exit = bal(exit);
        if (b_exit <= 0.0) {
            const double tau = find_root(bal, t1, exit, kEventRoot).x;
            push_arc(t1, tau, Regime::Amortizing, B, B, c, g, paid_);
            paid_ += c * exp_integral(g - r_, t1, tau);
            s_ = {tau, 0.0, 0.0};
            paid_off_ = true;
            push_event(tau, EventKind::PaidOff);
            return std::nullopt;
        }
        push_arc(t1, exit, Regime::Amortizing, B, B, c, g, paid_);
        paid_ += c * exp_integral(g - r_, t1, exit);
        s_ = {exit, b_exit, b_exit};
        if (exits) {
            push_event(exit, EventKind::InterestAccrues);
            return Regime::Accruing;
        }
        return std::nullopt;
    }

    double k_;
    double r_;
    const RateCurve& alpha_;
    LoanState s_;
    std::vector<Arc>* arcs_;
    std::vector<TrajectoryEvent>* events_;
    double paid_ = 0.0;
    bool paid_off_ = false;
    std::optional<Regime> last_;
    double first_amortization_ = std::numeric_limits<double>::infinity();
};

// Payoff time for compound dynamics from `from`: first t with int_{t0}^t e^{-ks} alpha = b0 e^{-k t0}.
std::optional<double> compound_payoff(double k, const RateCurve& alpha, LoanState from, double to) {
    const double target = from.balance * std::exp(-k * from.t);
    if (!(target > 0.0)) return from.t;
    double acc = 0.0;
    for (const auto& p : alpha.clipped(from.t, to)) {
        const double piece = p.coef * exp_integral(p.growth - k, p.start, p.end);
        if (acc + piece >= target) {
            const double base = acc;
            auto f = [&](double t) {
                return base + p.coef * exp_integral(p.growth - k, p.start, t) - target;
            };
            return find_root(f, p.start, p.end, kEventRoot).x;
        }
        acc += piece;
    }
    return std::nullopt;
}

}  // namespace

double Arc::balance(double t, double loan_rate) const {
    if (regime == Regime::Accruing)
        return balance0 + loan_rate * principal * (t - t0) - coef * exp_integral(growth, t0, t);
    const double d = t - t0;
    return std::exp(loan_rate * d) *
           (balance0 - coef * std::exp(growth * t0) * exp_integral(growth - loan_rate, d));
}

double Arc::discounted_paid(double t, double discount) const {
    return paid0 + coef * exp_integral(growth - discount, t0, t);
}

Propagation propagate_simple(const LoanTerms& terms, const RateCurve& alpha, LoanState from,
                             double to, std::vector<Arc>* arcs,
                             std::vector<TrajectoryEvent>* events) {
    if (from.principal > from.balance) from.principal = from.balance;
    SimpleRun run(terms, alpha, from, arcs, events);
    return run.run(to);
}

Propagation propagate_compound(const LoanTerms& terms, const RateCurve& alpha, LoanState from,
                               double to) {
    const double k = terms.loan_rate();
    Propagation out;
    if (const auto tau = compound_payoff(k, alpha, from, to)) {
        out.state = {*tau, 0.0, 0.0};
        out.discounted_paid = alpha.integral(from.t, *tau, terms.r());
        out.paid_off = true;
        return out;
    }
    const double b = std::exp(k * (to - from.t)) *
                     (from.balance - std::exp(k * from.t) * alpha.integral(from.t, to, k));
    out.state = {to, b, b};
    out.discounted_paid = alpha.integral(from.t, to, terms.r());
    return out;
}

double balance_compound(const LoanTerms& terms, double x, const RateCurve& alpha, double t) {
    const double k = terms.loan_rate();
    return std::exp(k * t) * (x - alpha.integral(0.0, t, k));
}

double balance_compound(const LoanTerms& terms, double x, const Strategy& strategy,
                        const PaymentBounds& bounds, double t) {
    require_positive_balance(x);
    if (!(t >= 0.0 && t <= terms.horizon())) throw DomainError("t must lie in [0, T]");
    return balance_compound(terms, x, realize(strategy, bounds), t);
}

CostBreakdown evaluate_cost(const LoanTerms& terms, double x, const RateCurve& alpha,
                            InterestMode mode) {
    const double T = terms.horizon();
    const LoanState start{0.0, x, x};
    const Propagation prop = mode == InterestMode::Compound
                                 ? propagate_compound(terms, alpha, start, T)
                                 : propagate_simple(terms, alpha, start, T);
    CostBreakdown out{};
    out.tau = prop.paid_off ? prop.state.t : T;
    out.kind = prop.paid_off ? StopKind::PaidOff : StopKind::Forgiven;
    out.final_balance = prop.paid_off ? 0.0 : prop.state.balance;
    out.cost = prop.discounted_paid +
               std::exp(-terms.r() * out.tau) * terms.omega() * out.final_balance;
    out.theta = std::min(prop.first_amortization, T);
    return out;
}

StopTime payoff_time(const LoanTerms& terms, double x, const Strategy& strategy,
                     const PaymentBounds& bounds, InterestMode mode) {
    require_positive_balance(x);
    const auto c = evaluate_cost(terms, x, realize(strategy, bounds), mode);
    return {c.tau, c.kind};
}

ValuationResult cost(const LoanTerms& terms, double x, const Strategy& strategy,
                     const PaymentBounds& bounds, InterestMode mode) {
    require_positive_balance(x);
    const auto c = evaluate_cost(terms, x, realize(strategy, bounds), mode);
    ValuationResult out;
    out.cost = c.cost;
    out.strategy = strategy;
    out.tau = c.tau;
    out.stop_kind = c.kind;
    out.forgiven_balance = c.final_balance;
    out.tax_payment = std::exp(-terms.r() * c.tau) * terms.omega() * c.final_balance;
    out.mode = mode;
    return out;
}

namespace {

std::vector<double> sample_times(double tau, double step, const std::vector<double>& extra) {
    std::vector<double> times;
    const auto n = static_cast<std::size_t>(std::floor(tau / step));
    times.reserve(n + extra.size() + 2);
    for (std::size_t i = 0; i <= n; ++i) times.push_back(static_cast<double>(i) * step);
    for (double t : extra)
        if (t >= 0.0 && t <= tau) times.push_back(t);
    times.push_back(tau);
    std::sort(times.begin(), times.end());
    std::vector<double> out;
    for (double t : times) {
        if (t > tau) break;
        if (out.empty() || t - out.back() > 1e-12) out.push_back(t);
    }
    out.back() = tau;
    return out;
}

}  // namespace

Trajectory simulate(const LoanTerms& terms, double x, const Strategy& strategy,
                    const PaymentBounds& bounds, double step_hint, InterestMode mode) {
    require_positive_balance(x);
    const double T = terms.horizon();
    if (!std::isfinite(step_hint) || !(step_hint > 0.0))
        throw InvalidArgument("sampling step must be > 0");
    step_hint = std::max(step_hint, T * 1e-6);
    const RateCurve alpha = realize(strategy, bounds);
    const double k = terms.loan_rate(), r = terms.r();

    Trajectory traj;
    traj.mode = mode;

    if (mode == InterestMode::Simple) {
        std::vector<Arc> arcs;
        const auto prop = propagate_simple(terms, alpha, {0.0, x, x}, T, &arcs, &traj.events);
        traj.tau = prop.paid_off ? prop.state.t : T;
        traj.stop_kind = prop.paid_off ? StopKind::PaidOff : StopKind::Forgiven;
        traj.theta = std::min(prop.first_amortization, T);
        std::vector<double> cuts;
        for (const auto& a : arcs) cuts.push_back(a.t0);
        std::size_t ai = 0;
        for (double t : sample_times(traj.tau, step_hint, cuts)) {
            while (ai + 1 < arcs.size() && arcs[ai].t1 < t) ++ai;
            const Arc& a = arcs[ai];
            double b = a.balance(t, k);
            double p = a.regime == Regime::Accruing ? a.principal : b;
            if (prop.paid_off && t == traj.tau) b = p = 0.0;
            traj.samples.push_back({t, b, std::min(p, b), alpha.value(t), a.discounted_paid(t, r)});
        }
        // events can repeat at a regime boundary that coincides with a piece break
        traj.events.erase(std::unique(traj.events.begin(), traj.events.end(),
                                      [](const TrajectoryEvent& a, const TrajectoryEvent& b) {
                                          return a.kind == b.kind &&
                                                 std::abs(a.t - b.t) <= 1e-12;
                                      }),
                          traj.events.end());
        return traj;
    }

    const auto prop = propagate_compound(terms, alpha, {0.0, x, x}, T);
    traj.tau = prop.paid_off ? prop.state.t : T;
    traj.stop_kind = prop.paid_off ? StopKind::PaidOff : StopKind::Forgiven;
    std::vector<double> cuts;
    for (const auto& p : alpha.pieces()) cuts.push_back(p.start);
    double running_min = x;
    bool falling = false;
    traj.theta = T;
    for (double t : sample_times(traj.tau, step_hint, cuts)) {
        double b = balance_compound(terms, x, alpha, t);
        if (prop.paid_off && t == traj.tau) b = 0.0;
        if (!falling && b < x - 1e-12 * std::max(1.0, x)) {
            falling = true;
            traj.theta = t;
        }
        running_min = std::min(running_min, b);
        traj.samples.push_back({t, b, running_min, alpha.value(t), alpha.integral(0.0, t, r)});
    }
    if (prop.paid_off) traj.events.push_back({traj.tau, EventKind::PaidOff});
    return traj;
}

}  // namespace loancost
