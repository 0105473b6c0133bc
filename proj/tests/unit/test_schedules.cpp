#include <catch_amalgamated.hpp>

#include <cmath>

#include "loancost/errors.hpp"
#include "loancost/schedules.hpp"

using namespace loancost;
using Catch::Approx;

TEST_CASE("reference profile") {
    const auto p = reference_profile();
    CHECK(p.annual_income == 82.0);
    CHECK(p.subsistence == 32.0);
    const auto b = bounds_from_profile(p);
    CHECK(b.min_rate(0.0) == Approx(5.0).epsilon(1e-14));
    CHECK(b.max_rate(0.0) == Approx(15.0).epsilon(1e-14));
    CHECK(b.min_rate(10.0) == Approx(5.0 * std::exp(0.4)).epsilon(1e-14));
    CHECK(b.max_rate(10.0) == Approx(15.0 * std::exp(0.4)).epsilon(1e-14));
    CHECK(b.min_nondecreasing());
    CHECK(std::isinf(b.coverage()));
}

TEST_CASE("zero growth gives constant bounds") {
    const auto b = bounds_from_profile({60.0, 40.0, 0.0, 0.1, 0.25});
    CHECK(b.min_rate(0.0) == Approx(2.0));
    CHECK(b.min_rate(17.0) == Approx(2.0));
    CHECK(b.max_rate(17.0) == Approx(5.0));
}

TEST_CASE("profile validation") {
    CHECK_THROWS_AS(bounds_from_profile({30.0, 32.0, 0.04, 0.1, 0.3}), ZeroCapacityError);
    CHECK_THROWS_AS(bounds_from_profile({32.0, 32.0, 0.04, 0.1, 0.3}), ZeroCapacityError);
    CHECK_THROWS_AS(bounds_from_profile({82.0, 32.0, 0.04, 0.2, 0.2}), InvalidArgument);
    CHECK_THROWS_AS(bounds_from_profile({82.0, 32.0, 0.04, 0.3, 0.1}), InvalidArgument);
    CHECK_THROWS_AS(bounds_from_profile({82.0, 32.0, 0.04, 0.0, 0.1}), InvalidArgument);
    CHECK_THROWS_AS(bounds_from_profile({NAN, 32.0, 0.04, 0.1, 0.3}), InvalidArgument);
}
