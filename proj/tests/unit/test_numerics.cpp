#include <catch_amalgamated.hpp>

#include <cmath>

#include "loancost/errors.hpp"
#include "loancost/numerics.hpp"
#include "oracles.hpp"

using namespace loancost;
using Catch::Approx;

TEST_CASE("exp_integral matches the antiderivative and its small-rate limit") {
    CHECK(numerics::exp_integral(0.07, 10.0) == Approx((std::exp(0.7) - 1.0) / 0.07).epsilon(1e-14));
    CHECK(numerics::exp_integral(0.0, 3.5) == 3.5);
    CHECK(numerics::exp_integral(1e-15, 2.0) == Approx(2.0).epsilon(1e-14));
    CHECK(numerics::exp_integral(-0.03, 2.0, 5.0) ==
          Approx((std::exp(-0.15) - std::exp(-0.06)) / -0.03).epsilon(1e-14));
}

TEST_CASE("find_root converges on a bracketed monotone function") {
    auto f = [](double t) { return std::exp(t) - 3.0; };
    const auto root = numerics::find_root(f, 0.0, 5.0, {1e-13, 0.0, 400});
    CHECK(root.x == Approx(std::log(3.0)).margin(1e-12));
    CHECK(root.lo <= root.x);
    CHECK(root.x <= root.hi);
    const double ref = oracle::bisect(f, 0.0, 5.0);
    CHECK(std::abs(root.x - ref) < 1e-12);
}

TEST_CASE("find_root accepts a zero at an end and rejects missing brackets") {
    auto f = [](double t) { return t - 1.0; };
    CHECK(numerics::find_root(f, 1.0, 2.0).x == 1.0);
    CHECK(numerics::find_root(f, 0.0, 1.0).x == 1.0);
    CHECK_THROWS_AS(numerics::find_root(f, 2.0, 3.0), NumericalError);
}

TEST_CASE("find_root handles a flat-then-steep function without stalling") {
    auto f = [](double t) { return t < 0.9 ? -1e-300 : std::pow(t - 0.9, 9) * 1e6 - 1e-20; };
    const auto root = numerics::find_root(f, 0.0, 2.0);
    CHECK(root.hi - root.lo <= 1e-10 + 1e-15);
    CHECK(root.iterations < 400);
}

TEST_CASE("adaptive Simpson integrates smooth and kinked functions") {
    auto smooth = [](double t) { return std::exp(-0.03 * t) * 5.0 * std::exp(0.04 * t); };
    const double exact = 5.0 * (std::exp(0.01 * 25.0) - 1.0) / 0.01;
    CHECK(numerics::integrate_adaptive(smooth, 0.0, 25.0) == Approx(exact).epsilon(1e-12));
    auto kink = [](double t) { return std::abs(t - 1.3); };
    CHECK(numerics::integrate_adaptive(kink, 0.0, 2.0, 1e-12) ==
          Approx(0.5 * 1.3 * 1.3 + 0.5 * 0.7 * 0.7).epsilon(1e-10));
    CHECK(numerics::integrate_adaptive(kink, 2.0, 0.0, 1e-12) ==
          Approx(-(0.5 * 1.3 * 1.3 + 0.5 * 0.7 * 0.7)).epsilon(1e-10));
}
