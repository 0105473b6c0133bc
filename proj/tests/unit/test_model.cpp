#include <catch_amalgamated.hpp>

#include <cmath>
#include <limits>

#include "loancost/errors.hpp"
#include "loancost/model.hpp"

using namespace loancost;
using Catch::Approx;

TEST_CASE("LoanTerms rejects values outside the model") {
    CHECK_NOTHROW(LoanTerms(0.03, 0.04, 0.4, 25.0));
    CHECK_THROWS_AS(LoanTerms(0.0, 0.04, 0.4, 25.0), InvalidArgument);
    CHECK_THROWS_AS(LoanTerms(0.03, 0.0, 0.4, 25.0), InvalidArgument);
    CHECK_THROWS_AS(LoanTerms(0.03, 0.04, 0.0, 25.0), InvalidArgument);
    CHECK_THROWS_AS(LoanTerms(0.03, 0.04, 1.0, 25.0), InvalidArgument);
    CHECK_THROWS_AS(LoanTerms(0.03, 0.04, 0.4, 0.0), InvalidArgument);
    CHECK_THROWS_AS(LoanTerms(std::nan(""), 0.04, 0.4, 25.0), InvalidArgument);
    CHECK(LoanTerms(0.03, 0.04, 0.4, 25.0).loan_rate() == Approx(0.07));
}

TEST_CASE("payment bounds keep 0 < m < M") {
    CHECK_THROWS_AS(PaymentBounds::constant(0.0, 1.0), InvalidArgument);
    CHECK_THROWS_AS(PaymentBounds::constant(2.0, 2.0), InvalidArgument);
    CHECK_THROWS_AS(PaymentBounds::tabulated({{0.0, 5.0}, {3.0}, {2.0}}), InvalidArgument);
    CHECK_THROWS_AS(PaymentBounds::tabulated({{0.0, 5.0, 4.0}, {1.0, 1.0}, {2.0, 2.0}}), InvalidArgument);
    CHECK_THROWS_AS(PaymentBounds::exponential_income({30.0, 32.0, 0.04, 0.1, 0.3}), InvalidArgument);
    const auto b = PaymentBounds::tabulated({{0.0, 5.0, 25.0}, {1.0, 2.0}, {3.0, 4.0}});
    CHECK(b.min_rate(5.0) == 1.0);
    CHECK(b.min_rate(5.5) == 2.0);
    CHECK(b.coverage() == 25.0);
    CHECK(b.min_nondecreasing());
    const auto down = PaymentBounds::tabulated({{0.0, 5.0, 25.0}, {2.0, 1.0}, {3.0, 4.0}});
    CHECK_FALSE(down.min_nondecreasing());
    CHECK(PaymentBounds::exponential_income({82.0, 32.0, 0.04, 0.1, 0.3}).min_nondecreasing());
    CHECK_FALSE(PaymentBounds::exponential_income({82.0, 32.0, -0.01, 0.1, 0.3}).min_nondecreasing());
}

TEST_CASE("require_coverage rejects bounds shorter than the horizon") {
    const auto b = PaymentBounds::tabulated({{0.0, 10.0}, {1.0}, {2.0}});
    CHECK_NOTHROW(require_coverage(LoanTerms(0.03, 0.04, 0.4, 10.0), b));
    CHECK_THROWS_AS(require_coverage(LoanTerms(0.03, 0.04, 0.4, 25.0), b), InvalidArgument);
}

TEST_CASE("canonical strategies and labels") {
    CHECK(Strategy::max_only(25).label() == "max");
    CHECK(Strategy::min_only(25).label() == "min-only");
    CHECK(Strategy::max_min(2.0, 25).label() == "max-min");
    CHECK(Strategy::max_min(0.0, 25) == Strategy::min_only(25));
    CHECK(Strategy::max_min(25.0, 25) == Strategy::max_only(25));
    CHECK(Strategy::min_max_min(0.0, 3.0, 25) == Strategy::max_min(3.0, 25));
    CHECK(Strategy::min_max_min(1.0, 3.0, 25).label() == "min-max-min");
    CHECK(Strategy::min_max_min(1.0, 25.0, 25).label() == "min-max");
    CHECK(Strategy::max_min(2.0, 25).switch_times() == std::vector<double>{2.0});
    Strategy custom({{5.0, ConstantRate{8.0}}, {25.0, MinRate{}}}, 25.0);
    CHECK(custom.label() == "custom");
}

TEST_CASE("strategy invariants are enforced") {
    CHECK_THROWS_AS(Strategy({}, 25.0), InvalidArgument);
    CHECK_THROWS_AS(Strategy({{5.0, MinRate{}}, {5.0, MaxRate{}}}, 5.0), InvalidArgument);
    CHECK_THROWS_AS(Strategy({{5.0, MinRate{}}}, 25.0), InvalidArgument);
    CHECK_THROWS_AS(Strategy({{25.0, ConstantRate{-1.0}}}, 25.0), InvalidArgument);
    Strategy merged({{5.0, MinRate{}}, {10.0, MinRate{}}, {25.0, MaxRate{}}}, 25.0);
    CHECK(merged.segments().size() == 2);
}

TEST_CASE("overlay replaces only the middle window") {
    const auto base = Strategy::max_only(25.0);
    const auto out = base.overlay(5.0, 10.0, Strategy::min_only(25.0));
    REQUIRE(out.segments().size() == 3);
    CHECK(out.segments()[0].end == 5.0);
    CHECK(out.segments()[1].end == 10.0);
    CHECK(std::holds_alternative<MinRate>(out.segments()[1].policy));
    CHECK(base.overlay(0.0, 25.0, Strategy::min_only(25.0)) == Strategy::min_only(25.0));
}

TEST_CASE("realize checks admissibility instead of clamping") {
    const auto b = PaymentBounds::constant(5.0, 15.0);
    CHECK_NOTHROW(realize(Strategy({{25.0, ConstantRate{10.0}}}, 25.0), b));
    CHECK_THROWS_AS(realize(Strategy({{25.0, ConstantRate{16.0}}}, 25.0), b), AdmissibilityError);
    CHECK_THROWS_AS(realize(Strategy({{25.0, ConstantRate{4.0}}}, 25.0), b), AdmissibilityError);
    // a constant level that starts inside growing bounds but falls below m later
    const auto grow = PaymentBounds::exponential_income({82.0, 32.0, 0.04, 0.1, 0.3});
    CHECK_THROWS_AS(realize(Strategy({{25.0, ConstantRate{6.0}}}, 25.0), grow), AdmissibilityError);
    const auto tab = Strategy({{25.0, TabulatedRate{{0.0, 10.0, 25.0}, {6.0, 20.0}}}}, 25.0);
    CHECK_THROWS_AS(realize(tab, b), AdmissibilityError);
    const auto alpha = realize(Strategy({{25.0, TabulatedRate{{0.0, 10.0, 25.0}, {6.0, 12.0}}}}, 25.0), b);
    CHECK(alpha.value(10.0) == 6.0);
    CHECK(alpha.value(10.5) == 12.0);
}

TEST_CASE("mode and stop-kind strings round trip") {
    CHECK(parse_mode("compound") == InterestMode::Compound);
    CHECK(parse_mode("simple") == InterestMode::Simple);
    CHECK_FALSE(parse_mode("monthly").has_value());
    CHECK(to_string(InterestMode::Simple) == "simple");
    CHECK(to_string(StopKind::PaidOff) == "paid_off");
    CHECK(to_string(StopKind::Forgiven) == "forgiven");
}
