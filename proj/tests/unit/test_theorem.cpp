#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "loancost/dynamics.hpp"
#include "loancost/errors.hpp"
#include "loancost/theorem.hpp"
#include "oracles.hpp"

using namespace loancost;
using Catch::Approx;

namespace {

const LoanTerms kTerms(0.03, 0.04, 0.4, 25.0);
const PaymentBounds kConst = PaymentBounds::constant(5.0, 15.0);

double riemann_t_star(const LoanTerms& t, double m, double M) {
    const double r = t.r(), b = t.beta(), w = t.omega(), T = t.horizon();
    const double tc = std::max(0.0, T + std::log(w) / b);
    auto weight = [&](double s) { return std::exp(-r * s) * (1.0 - w * std::exp(b * (T - s))); };
    const double h = 1e-6;
    const double rhs = oracle::riemann([&](double s) { return m * weight(s); }, tc, T, h);
    double acc = 0.0, s = tc;
    while (s < T) {
        const double inc = M * weight(s + 0.5 * h) * h;
        if (acc + inc >= rhs) return s + h * (rhs - acc) / inc;
        acc += inc;
        s += h;
    }
    return T;
}

}  // namespace

TEST_CASE("critical horizon") {
    CHECK(critical_horizon(kTerms) == Approx(25.0 + std::log(0.4) / 0.04).margin(1e-14));
    CHECK(critical_horizon(kTerms) == Approx(2.0927).margin(1e-4));
    CHECK(critical_horizon(LoanTerms(0.03, 0.04, 0.3, 25.0)) == 0.0);
    const double near_one = critical_horizon(LoanTerms(0.03, 0.04, 1.0 - 1e-9, 25.0));
    CHECK(near_one < 25.0);
    CHECK(near_one > 25.0 - 1e-6);
}

TEST_CASE("t* agrees with a brute-force Riemann sum") {
    const double ts = t_star(kTerms, kConst);
    const double ref = riemann_t_star(kTerms, 5.0, 15.0);
    CHECK(std::abs(ts - ref) < 1e-5);
    CHECK(ts > critical_horizon(kTerms));
    CHECK(ts < 25.0);
}

TEST_CASE("t* tends to T as m approaches M") {
    const double ts = t_star(kTerms, PaymentBounds::constant(15.0 - 1e-7, 15.0));
    CHECK(ts == Approx(25.0).margin(1e-4));
}

TEST_CASE("thresholds are ordered on random draws") {
    std::mt19937_64 rng(42);
    for (int i = 0; i < 100; ++i) {
        const auto in = oracle::draw_instance(rng);
        const auto th = thresholds(in.terms, in.bounds);
        CHECK(th.t_c >= 0.0);
        CHECK(th.t_c < in.terms.horizon());
        CHECK(th.t_star > th.t_c);
        CHECK(th.t_star < in.terms.horizon());
        CHECK(th.x_hat <= th.x_c);
        CHECK(th.x_c < th.x_star);
        CHECK(th.x_star < th.x_upper);
        CHECK(th.x_lower < th.x_upper);
        CHECK(critical_balance(in.terms, in.bounds) == Approx(th.x_star).epsilon(1e-14));
        const double v1 = value_v1(in.terms, in.bounds, th.x_star);
        const double v2 = value_v2(in.terms, in.bounds, th.x_star).value;
        CHECK(std::abs(v1 - v2) / v2 <= 1e-6);
    }
}

TEST_CASE("v2 closed-form example with constant M = 15") {
    const double x = 15.0 * (1.0 - std::exp(-0.7)) / 0.07;
    CHECK(x == Approx(107.875).margin(5e-4));
    const auto v = value_v2(kTerms, kConst, x);
    CHECK(v.payoff_time == Approx(10.0).margin(1e-10));
    CHECK(v.value == Approx(15.0 * (1.0 - std::exp(-0.3)) / 0.03).epsilon(1e-12));
    CHECK(v.value == Approx(129.591).margin(5e-4));
    CHECK(v.value == Approx(oracle::riemann([](double s) { return 15.0 * std::exp(-0.03 * s); }, 0.0, 10.0, 1e-4)).epsilon(1e-8));
    CHECK(value_v2(kTerms, kConst, 1e-9).value < 1e-8);
    double prev = 0.0;
    for (int i = 1; i <= 50; ++i) {
        const double tm = value_v2(kTerms, kConst, 3.0 * i).payoff_time;
        CHECK(tm > prev);
        prev = tm;
    }
    CHECK_THROWS_AS(value_v2(kTerms, kConst, 200.0), DomainError);
    CHECK_THROWS_AS(value_v2(kTerms, kConst, 0.0), DomainError);
}

TEST_CASE("v1 is affine in x with slope omega e^{beta T}") {
    const double slope = 0.4 * std::exp(1.0);
    CHECK(slope == Approx(1.0873).margin(1e-4));
    for (double x : {50.0, 150.0, 400.0}) {
        const double d = value_v1(kTerms, kConst, x + 10.0) - value_v1(kTerms, kConst, x);
        CHECK(d == Approx(10.0 * slope).epsilon(1e-12));
    }
    // with omega -> 0 the critical horizon is 0 and v1 is the discounted minimum payments
    const LoanTerms tiny(0.03, 0.04, 1e-9, 25.0);
    CHECK(critical_horizon(tiny) == 0.0);
    CHECK(value_v1(tiny, kConst, 100.0) == Approx(5.0 * (1.0 - std::exp(-0.75)) / 0.03).epsilon(1e-7));
}

TEST_CASE("v1 - v2 is strictly decreasing with its sign change at x*") {
    const auto b = PaymentBounds::exponential_income({82.0, 32.0, 0.04, 0.1, 0.3});
    const auto th = thresholds(kTerms, b);
    double prev = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= 512; ++i) {
        const double x = th.x_hat + (th.x_upper - th.x_hat) * i / 512.0;
        const double d = value_v1(kTerms, b, x) - value_v2(kTerms, b, x).value;
        CHECK(d < prev);
        if (x < th.x_star - 1e-9) CHECK(d > 0.0);
        if (x > th.x_star + 1e-9) CHECK(d < 0.0);
        prev = d;
    }
}

TEST_CASE("critical balance falls as the discount rate rises") {
    const auto b = PaymentBounds::exponential_income({82.0, 32.0, 0.04, 0.1, 0.3});
    double prev = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= 30; ++i) {
        const double xs = critical_balance(LoanTerms(0.005 + 0.003 * i, 0.04, 0.4, 25.0), b);
        CHECK(xs <= prev + 1e-9);
        prev = xs;
    }
}

TEST_CASE("optimal compound strategy branches and agrees with cost()") {
    const auto th = thresholds(kTerms, kConst);
    const auto big = optimal_strategy_compound(kTerms, kConst, th.x_upper * 1.2);
    CHECK(big.strategy == Strategy::max_min(th.t_c, 25.0));
    CHECK(big.valuation.tau == 25.0);
    CHECK(big.valuation.stop_kind == StopKind::Forgiven);
    const auto small = optimal_strategy_compound(kTerms, kConst, th.x_lower * 0.9);
    CHECK(small.strategy == Strategy::max_only(25.0));
    CHECK(small.valuation.tau < 25.0);
    CHECK(small.valuation.tau == Approx(value_v2(kTerms, kConst, th.x_lower * 0.9).payoff_time).margin(1e-9));
    const auto tie = optimal_strategy_compound(kTerms, kConst, th.x_star);
    CHECK(tie.strategy.label() == "max");
    CHECK(value_v1(kTerms, kConst, th.x_star) == Approx(value_v2(kTerms, kConst, th.x_star).value).epsilon(1e-9));
    CHECK(optimal_strategy_compound(kTerms, kConst, th.x_star * (1 + 1e-9)).strategy.label() == "max-min");

    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 40; ++i) {
        const auto in = oracle::draw_instance(rng);
        const auto t2 = thresholds(in.terms, in.bounds);
        const double x = 1.5 * t2.x_upper * u(rng) + 1e-3;
        const auto opt = optimal_strategy_compound(in.terms, in.bounds, x);
        const double c = cost(in.terms, x, opt.strategy, in.bounds, InterestMode::Compound).cost;
        CHECK(opt.valuation.cost == Approx(c).epsilon(1e-8));
    }
    CHECK(optimal_strategy_compound(LoanTerms(0.03, 0.04, 0.3, 25.0), kConst, 1000.0).strategy.label() == "min-only");
}

TEST_CASE("switch-cost curve f is minimised at t_c for large balances") {
    const auto th = thresholds(kTerms, kConst);
    const double x = th.x_upper * 1.3;
    int best = 0;
    double best_v = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= 512; ++i) {
        const double v = switch_cost_f(kTerms, kConst, x, 25.0 * i / 512.0);
        if (v < best_v) {
            best_v = v;
            best = i;
        }
    }
    CHECK(std::abs(25.0 * best / 512.0 - th.t_c) <= 25.0 / 512.0);
    CHECK(switch_cost_f(kTerms, kConst, x, th.t_c) == Approx(value_v1(kTerms, kConst, x)).epsilon(1e-12));
    CHECK_THROWS_AS(switch_cost_f(kTerms, kConst, x, 26.0), DomainError);
}

TEST_CASE("switch-cost curve g decreases to v2 at t_M") {
    const double x = 90.0;
    const auto v2 = value_v2(kTerms, kConst, x);
    double prev = std::numeric_limits<double>::infinity();
    // the min-only tail must repay by T, which needs t0 past some lower limit
    for (int i = 0; i <= 512; ++i) {
        const double t0 = v2.payoff_time * i / 512.0;
        double g;
        try {
            g = switch_cost_g(kTerms, kConst, x, t0);
        } catch (const DomainError&) {
            continue;
        }
        if (i < 512) CHECK(g < prev);
        prev = g;
    }
    CHECK(switch_cost_g(kTerms, kConst, x, v2.payoff_time) == Approx(v2.value).epsilon(1e-10));
    CHECK_THROWS_AS(switch_cost_g(kTerms, kConst, x, v2.payoff_time + 0.1), DomainError);
    // g matches the cost of the realised strategy
    const double t0 = 0.5 * v2.payoff_time;
    CHECK(switch_cost_g(kTerms, kConst, x, t0) ==
          Approx(cost(kTerms, x, Strategy::max_min(t0, 25.0), kConst, InterestMode::Compound).cost).epsilon(1e-9));
}

TEST_CASE("the compound optimum beats random admissible strategies") {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 5; ++i) {
        const auto in = oracle::draw_instance(rng);
        const auto th = thresholds(in.terms, in.bounds);
        const double x = 1.4 * th.x_upper * u(rng) + 1.0;
        const double best = optimal_strategy_compound(in.terms, in.bounds, x).valuation.cost;
        for (int j = 0; j < 200; ++j) {
            const auto s = oracle::draw_strategy(rng, in);
            CHECK(best <= cost(in.terms, x, s, in.bounds, InterestMode::Compound).cost + 1e-8);
        }
    }
}

TEST_CASE("every strategy is matched by some max-then-min switch") {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 20; ++i) {
        const auto in = oracle::draw_instance(rng);
        const double T = in.terms.horizon();
        const double x = 1.4 * thresholds(in.terms, in.bounds).x_upper * u(rng) + 1.0;
        const auto s = oracle::draw_strategy(rng, in);
        const double target = cost(in.terms, x, s, in.bounds, InterestMode::Compound).cost;
        double best = std::numeric_limits<double>::infinity();
        for (int j = 0; j <= 512; ++j)
            best = std::min(best, cost(in.terms, x, Strategy::max_min(T * j / 512.0, T), in.bounds,
                                       InterestMode::Compound).cost);
        CHECK(best <= target + 1e-8);
    }
}
