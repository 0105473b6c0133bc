#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "loancost/errors.hpp"
#include "loancost/numerics.hpp"
#include "loancost/rate_curve.hpp"
#include "oracles.hpp"

using namespace loancost;
using Catch::Approx;

TEST_CASE("step curves are left-continuous") {
    const std::vector<double> times{0.0, 2.0, 5.0};
    const std::vector<double> values{3.0, 7.0};
    const auto c = RateCurve::step(times, values);
    CHECK(c.value(0.0) == 3.0);
    CHECK(c.value(2.0) == 3.0);
    CHECK(c.right_value(2.0) == 7.0);
    CHECK(c.value(2.0 + 1e-9) == 7.0);
    CHECK(c.value(5.0) == 7.0);
    CHECK(c.end() == 5.0);
}

TEST_CASE("malformed pieces are rejected") {
    CHECK_THROWS_AS(RateCurve({{0.0, 1.0, 1.0, 0.0}, {1.5, 2.0, 1.0, 0.0}}), InvalidArgument);
    CHECK_THROWS_AS(RateCurve({{0.5, 1.0, 1.0, 0.0}}), InvalidArgument);
    const std::vector<double> t{0.0, 1.0, 1.0}, v{1.0, 2.0};
    CHECK_THROWS_AS(RateCurve::step(t, v), InvalidArgument);
}

TEST_CASE("closed-form discounted integrals agree with quadrature to 1e-10") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<ExpPiece> pieces;
        double start = 0.0;
        const int n = 1 + static_cast<int>(4 * u(rng));
        for (int i = 0; i < n; ++i) {
            const double end = i + 1 == n ? 30.0 : start + 0.5 + 8.0 * u(rng);
            pieces.push_back({start, end, 1.0 + 10.0 * u(rng), -0.05 + 0.1 * u(rng)});
            start = end;
        }
        const RateCurve c(pieces);
        const double a = 25.0 * u(rng), b = a + (30.0 - a) * u(rng);
        const double disc = 0.1 * u(rng);
        double quad = 0.0;
        for (const auto& p : c.clipped(a, b))
            quad += numerics::integrate_adaptive(
                [&](double s) { return std::exp(-disc * s) * p.value(s); }, p.start, p.end, 1e-12);
        CHECK(c.integral(a, b, disc) == Approx(quad).margin(1e-10));
    }
}

TEST_CASE("exponential and constant factories") {
    const auto e = RateCurve::exponential(5.0, 0.04);
    CHECK(e.value(10.0) == Approx(5.0 * std::exp(0.4)).epsilon(1e-15));
    CHECK(e.integral(0.0, 10.0, 0.0) == Approx(5.0 * (std::exp(0.4) - 1.0) / 0.04).epsilon(1e-13));
    const auto k = RateCurve::constant(15.0, 25.0);
    CHECK(k.integral(0.0, 10.0, 0.07) == Approx(15.0 * (1.0 - std::exp(-0.7)) / 0.07).epsilon(1e-13));
    CHECK(k.integral(3.0, 3.0, 0.07) == 0.0);
}

TEST_CASE("clipping keeps only the requested window") {
    const std::vector<double> times{0.0, 1.0, 2.0, 3.0};
    const std::vector<double> values{1.0, 2.0, 3.0};
    const auto c = RateCurve::step(times, values);
    const auto parts = c.clipped(0.5, 2.0);
    REQUIRE(parts.size() == 2);
    CHECK(parts[0].start == 0.5);
    CHECK(parts[0].end == 1.0);
    CHECK(parts[1].end == 2.0);
    CHECK(c.piece_after(1.0) == 1);
    CHECK(c.piece_after(0.0) == 0);
}
