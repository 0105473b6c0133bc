#pragma once

#include <algorithm>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "loancost/rate_curve.hpp"

namespace loancost {

enum class InterestMode { Compound, Simple };
enum class StopKind { PaidOff, Forgiven };

[[nodiscard]] std::string_view to_string(InterestMode mode) noexcept;
[[nodiscard]] std::string_view to_string(StopKind kind) noexcept;
[[nodiscard]] std::optional<InterestMode> parse_mode(std::string_view text) noexcept;

/// Discount rate r, loan-rate spread beta, tax rate omega on the forgiven balance,
/// and forgiveness horizon T (years). Validated on construction.
class LoanTerms {
public:
    LoanTerms(double r, double beta, double omega, double horizon);

    [[nodiscard]] double r() const noexcept { return r_; }
    [[nodiscard]] double beta() const noexcept { return beta_; }
    [[nodiscard]] double omega() const noexcept { return omega_; }
    [[nodiscard]] double horizon() const noexcept { return horizon_; }
    /// r + beta, the rate at which the balance accrues.
    [[nodiscard]] double loan_rate() const noexcept { return r_ + beta_; }

    friend bool operator==(const LoanTerms&, const LoanTerms&) = default;

private:
    double r_;
    double beta_;
    double omega_;
    double horizon_;
};

/// m(t) = f_min (I0 - S0) e^{g t}, M(t) = f_max (I0 - S0) e^{g t}.
struct ExponentialIncome {
    double income;
    double subsistence;
    double growth;
    double f_min;
    double f_max;
};

/// Piecewise-constant bounds: min[i], max[i] on (times[i], times[i+1]].
struct TabulatedBounds {
    std::vector<double> times;
    std::vector<double> min;
    std::vector<double> max;
};

/// Minimum m(t) and maximum M(t) payment rates.
class PaymentBounds {
public:
    static PaymentBounds exponential_income(const ExponentialIncome& params);
    static PaymentBounds tabulated(TabulatedBounds table);
    /// Constant m and M for all t.
    static PaymentBounds constant(double min_rate, double max_rate);

    [[nodiscard]] const RateCurve& min_curve() const noexcept { return min_; }
    [[nodiscard]] const RateCurve& max_curve() const noexcept { return max_; }
    [[nodiscard]] double min_rate(double t) const { return min_.value(t); }
    [[nodiscard]] double max_rate(double t) const { return max_.value(t); }

    /// Rates are defined on [0, coverage()]; may be infinite.
    [[nodiscard]] double coverage() const noexcept { return std::min(min_.end(), max_.end()); }
    [[nodiscard]] bool min_nondecreasing() const;

    [[nodiscard]] const std::variant<ExponentialIncome, TabulatedBounds>& representation() const noexcept {
        return repr_;
    }

private:
    PaymentBounds(RateCurve min, RateCurve max, std::variant<ExponentialIncome, TabulatedBounds> repr);

    RateCurve min_;
    RateCurve max_;
    std::variant<ExponentialIncome, TabulatedBounds> repr_;
};

struct MinRate {
    friend bool operator==(const MinRate&, const MinRate&) = default;
};
struct MaxRate {
    friend bool operator==(const MaxRate&, const MaxRate&) = default;
};
struct ConstantRate {
    double level;
    friend bool operator==(const ConstantRate&, const ConstantRate&) = default;
};
/// values[i] on (times[i], times[i+1]], absolute times.
struct TabulatedRate {
    std::vector<double> times;
    std::vector<double> values;
    friend bool operator==(const TabulatedRate&, const TabulatedRate&) = default;
};

using Policy = std::variant<MinRate, MaxRate, ConstantRate, TabulatedRate>;

/// Policy in force on (previous end, end].
struct StrategySegment {
    double end;
    Policy policy;
    friend bool operator==(const StrategySegment&, const StrategySegment&) = default;
};

/// Piecewise repayment policy covering [0, T].
class Strategy {
public:
    /// Segments must have strictly increasing end times with the last equal to horizon.
    /// Adjacent segments with identical policies are merged.
    Strategy(std::vector<StrategySegment> segments, double horizon);

    static Strategy max_only(double horizon);
    static Strategy min_only(double horizon);
    /// Max on [0, t0], min on (t0, T]. Degenerates to min-only at t0 = 0 and max-only at T.
    static Strategy max_min(double t0, double horizon);
    /// Min on [0, t0], max on (t0, t1], min on (t1, T].
    static Strategy min_max_min(double t0, double t1, double horizon);

    [[nodiscard]] std::span<const StrategySegment> segments() const noexcept { return segments_; }
    [[nodiscard]] double horizon() const noexcept { return horizon_; }

    /// "max", "min-only", "max-min", "min-max", "min-max-min", or "custom".
    [[nodiscard]] std::string label() const;

    /// Times where the policy changes (segment ends other than the horizon).
    [[nodiscard]] std::vector<double> switch_times() const;

    /// This strategy on [0, from] and (to, T], `middle` on (from, to].
    [[nodiscard]] Strategy overlay(double from, double to, const Strategy& middle) const;

    friend bool operator==(const Strategy&, const Strategy&) = default;

private:
    std::vector<StrategySegment> segments_;
    double horizon_;
};

/// Payment rate realized by `strategy` under `bounds` on [0, T].
/// Throws AdmissibilityError if any rate leaves [m(t), M(t)].
[[nodiscard]] RateCurve realize(const Strategy& strategy, const PaymentBounds& bounds);

/// Throws InvalidArgument if the bounds do not cover [0, T].
void require_coverage(const LoanTerms& terms, const PaymentBounds& bounds);

struct TrajectorySample {
    double t;
    double balance;
    double principal;
    double rate;
    double discounted_paid;
};

enum class EventKind {
    PrincipalStartsFalling,  ///< balance meets the principal and begins to amortize it
    InterestAccrues,         ///< payments drop below interest; principal freezes
    PaidOff,
};

struct TrajectoryEvent {
    double t;
    EventKind kind;
};

struct Trajectory {
    std::vector<TrajectorySample> samples;
    std::vector<TrajectoryEvent> events;
    double tau = 0.0;
    StopKind stop_kind = StopKind::Forgiven;
    double theta = 0.0;  ///< first time the principal drops below x (T if never)
    InterestMode mode = InterestMode::Simple;
};

struct ValuationResult {
    double cost = 0.0;
    Strategy strategy = Strategy::min_only(1.0);
    double tau = 0.0;
    StopKind stop_kind = StopKind::Forgiven;
    double forgiven_balance = 0.0;
    double tax_payment = 0.0;  ///< present value at t = 0 of omega * forgiven balance
    InterestMode mode = InterestMode::Compound;
};

}  // namespace loancost
