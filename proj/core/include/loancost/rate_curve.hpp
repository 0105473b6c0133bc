#pragma once

#include <cmath>
#include <limits>
#include <span>
#include <vector>

namespace loancost {

/// One analytic piece of a payment-rate function: coef * exp(growth * t) on (start, end].
struct ExpPiece {
    double start;
    double end;
    double coef;
    double growth;

    [[nodiscard]] double value(double t) const noexcept { return coef * std::exp(growth * t); }
    [[nodiscard]] double length() const noexcept { return end - start; }
};

/// Piecewise-exponential rate function on [0, end()], left-continuous at breakpoints.
///
/// Every rate the model handles (exponential income bounds, constant levels,
/// piecewise-constant tables, and any strategy assembled from them) has this form,
/// so integrals against exponential discount factors are available in closed form.
class RateCurve {
public:
    RateCurve() = default;
    explicit RateCurve(std::vector<ExpPiece> pieces);

    static RateCurve exponential(double coef, double growth,
                                 double end = std::numeric_limits<double>::infinity());
    static RateCurve constant(double level,
                              double end = std::numeric_limits<double>::infinity());
    /// Step function: values[i] on (times[i], times[i+1]]; times[0] must be 0.
    static RateCurve step(std::span<const double> times, std::span<const double> values);

    [[nodiscard]] double value(double t) const;        ///< left limit convention, f(0) = f(0+)
    [[nodiscard]] double right_value(double t) const;  ///< f(t+)

    /// Integral of exp(-discount * s) f(s) over [a, b].
    [[nodiscard]] double integral(double a, double b, double discount = 0.0) const;

    [[nodiscard]] std::span<const ExpPiece> pieces() const noexcept { return pieces_; }
    [[nodiscard]] double end() const noexcept { return pieces_.empty() ? 0.0 : pieces_.back().end; }
    [[nodiscard]] bool empty() const noexcept { return pieces_.empty(); }

    /// Pieces restricted to [a, b]; zero-length pieces are dropped.
    [[nodiscard]] std::vector<ExpPiece> clipped(double a, double b) const;

    /// Index of the piece in force just after t.
    [[nodiscard]] std::size_t piece_after(double t) const;

private:
    std::vector<ExpPiece> pieces_;
};

}  // namespace loancost
