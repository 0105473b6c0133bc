#include "loancost/dp_oracle.hpp"

#include <algorithm>
#include <cmath>

#include "loancost/dynamics.hpp"
#include "loancost/errors.hpp"
#include "loancost/parallel.hpp"

namespace loancost {

namespace {

struct Axis {
    double lo = 0.0;
    double hi = 0.0;
    int n = 1;

    [[nodiscard]] double node(int j) const {
        return n == 1 ? lo : lo + (hi - lo) * static_cast<double>(j) / (n - 1);
    }
    // Left node and weight of the right neighbour; clamps outside [lo, hi].
    void locate(double v, int& j, double& w) const {
        if (n == 1 || !(hi > lo)) {
            j = 0;
            w = 0.0;
            return;
        }
        const double s = std::clamp((v - lo) / (hi - lo) * (n - 1), 0.0, double(n - 1));
        j = std::min(static_cast<int>(s), n - 2);
        w = s - j;
    }
};

struct Level {
    Axis b;
    Axis p;
    std::vector<double> value;  // b-major

    [[nodiscard]] double at(double balance, double principal) const {
        if (!(balance > 0.0)) return 0.0;
        int i, j;
        double wi, wj;
        b.locate(balance, i, wi);
        p.locate(principal, j, wj);
        const int i1 = b.n == 1 ? i : i + 1, j1 = p.n == 1 ? j : j + 1;
        auto v = [&](int bi, int pj) { return value[static_cast<std::size_t>(bi * p.n + pj)]; };
        return (1 - wi) * ((1 - wj) * v(i, j) + wj * v(i, j1)) +
               wi * ((1 - wj) * v(i1, j) + wj * v(i1, j1));
    }
};

class Solver {
public:
    Solver(const LoanTerms& terms, double x, const PaymentBounds& bounds, int steps, int cells,
           InterestMode mode)
        : terms_(terms), x_(x), bounds_(bounds), steps_(steps), cells_(cells), mode_(mode) {}

    double solve() {
        const double T = terms_.horizon();
        levels_.resize(static_cast<std::size_t>(steps_) + 1);
        for (int i = 0; i <= steps_; ++i) levels_[static_cast<std::size_t>(i)] = make_level(time(i));
        auto& last = levels_.back();
        for (int bi = 0; bi < last.b.n; ++bi)
            for (int pj = 0; pj < last.p.n; ++pj)
                last.value[static_cast<std::size_t>(bi * last.p.n + pj)] =
                    std::exp(-terms_.r() * T) * terms_.omega() * last.b.node(bi);

        for (int i = steps_ - 1; i >= 0; --i) {
            auto& lv = levels_[static_cast<std::size_t>(i)];
            const auto& next = levels_[static_cast<std::size_t>(i) + 1];
            const double t = time(i), t_next = time(i + 1);
            parallel_for(lv.value.size(), [&](std::size_t idx) {
                const int bi = static_cast<int>(idx) / lv.p.n, pj = static_cast<int>(idx) % lv.p.n;
                const double b = lv.b.node(bi);
                const double p = mode_ == InterestMode::Compound ? b : std::min(lv.p.node(pj), b);
                lv.value[idx] = std::min(option(bounds_.min_curve(), t, t_next, b, p, next),
                                         option(bounds_.max_curve(), t, t_next, b, p, next));
            });
        }
        return levels_.front().at(x_, x_);
    }

    Strategy trace() const {
        std::vector<StrategySegment> segs;
        LoanState s{0.0, x_, x_};
        bool done = false;
        bool use_max = false;  // after payoff the last control is simply held
        for (int i = 0; i < steps_; ++i) {
            const double t_next = time(i + 1);
            if (!done) {
                const auto& next = levels_[static_cast<std::size_t>(i) + 1];
                const double vm = option(bounds_.min_curve(), s.t, t_next, s.balance, s.principal, next);
                const double vM = option(bounds_.max_curve(), s.t, t_next, s.balance, s.principal, next);
                use_max = vM < vm;
                const auto prop = step(use_max ? bounds_.max_curve() : bounds_.min_curve(), s, t_next);
                done = prop.paid_off;
                s = prop.state;
                s.t = t_next;
            }
            segs.push_back({t_next, use_max ? Policy{MaxRate{}} : Policy{MinRate{}}});
        }
        return Strategy(std::move(segs), terms_.horizon());
    }

private:
    [[nodiscard]] double time(int i) const {
        return i == steps_ ? terms_.horizon() : terms_.horizon() * i / steps_;
    }

    [[nodiscard]] Propagation step(const RateCurve& curve, LoanState s, double to) const {
        if (mode_ == InterestMode::Compound) return propagate_compound(terms_, curve, s, to);
        return propagate_simple(terms_, curve, s, to);
    }

    [[nodiscard]] double option(const RateCurve& curve, double t, double t_next, double b, double p,
                                const Level& next) const {
        if (!(b > 0.0)) return 0.0;
        const auto prop = step(curve, {t, b, p}, t_next);
        if (prop.paid_off) return prop.discounted_paid;
        return prop.discounted_paid + next.at(prop.state.balance, prop.state.principal);
    }

    [[nodiscard]] Level make_level(double t) const {
        const double k = terms_.loan_rate();
        const auto& m = bounds_.min_curve();
        const auto& M = bounds_.max_curve();
        const double all_min = std::max(0.0, std::exp(k * t) * (x_ - m.integral(0.0, t, k)));
        Level lv;
        if (mode_ == InterestMode::Compound) {
            const double all_max = std::max(0.0, std::exp(k * t) * (x_ - M.integral(0.0, t, k)));
            lv.b = {all_max, all_min, all_min > all_max ? cells_ : 1};
            lv.p = {0.0, 0.0, 1};
        } else {
            const double lo = std::max(0.0, x_ - M.integral(0.0, t));
            const double hi = std::max(lo, all_min);
            lv.b = {lo, hi, hi > lo ? cells_ : 1};
            const double p_hi = std::min(x_, hi);
            lv.p = {lo, p_hi, p_hi > lo ? cells_ : 1};
        }
        lv.value.assign(static_cast<std::size_t>(lv.b.n * lv.p.n), 0.0);
        return lv;
    }

    const LoanTerms& terms_;
    double x_;
    const PaymentBounds& bounds_;
    int steps_;
    int cells_;
    InterestMode mode_;
    std::vector<Level> levels_;
};

}  // namespace

DpResult dp_oracle(const LoanTerms& terms, double x, const PaymentBounds& bounds, int time_steps,
                   int state_cells, InterestMode mode) {
    if (!std::isfinite(x) || !(x > 0.0)) throw DomainError("initial balance x must be > 0");
    require_coverage(terms, bounds);
    if (time_steps < 1 || state_cells < 2) throw InvalidArgument("need >= 1 time step and >= 2 cells");
    if (time_steps > kDpMaxTimeSteps || state_cells > kDpMaxStateCells)
        throw ResourceLimitError("dp_oracle grid exceeds " + std::to_string(kDpMaxTimeSteps) +
                                 " steps or " + std::to_string(kDpMaxStateCells) + " cells per axis");

    Solver fine(terms, x, bounds, time_steps, state_cells, mode);
    const double value = fine.solve();
    Strategy policy = fine.trace();
    const double policy_cost = cost(terms, x, policy, bounds, mode).cost;
    double delta = 0.0;
    if (time_steps >= 2) {
        Solver coarse(terms, x, bounds, time_steps / 2, state_cells, mode);
        delta = std::abs(value - coarse.solve());
    }
    return {value, std::move(policy), policy_cost, delta, time_steps, state_cells, mode};
}

}  // namespace loancost
