#include "loancost/rate_curve.hpp"

#include <algorithm>

#include "loancost/errors.hpp"
#include "loancost/numerics.hpp"

namespace loancost {

RateCurve::RateCurve(std::vector<ExpPiece> pieces) : pieces_(std::move(pieces)) {
    if (pieces_.empty()) throw InvalidArgument("rate curve needs at least one piece");
    if (pieces_.front().start != 0.0) throw InvalidArgument("rate curve must start at t = 0");
    for (std::size_t i = 0; i < pieces_.size(); ++i) {
        const auto& p = pieces_[i];
        if (!(p.end > p.start)) throw InvalidArgument("rate curve piece has non-positive length");
        if (!std::isfinite(p.coef) || !std::isfinite(p.growth))
            throw InvalidArgument("rate curve piece has non-finite parameters");
        if (i > 0 && pieces_[i - 1].end != p.start)
            throw InvalidArgument("rate curve pieces must be contiguous");
    }
}

RateCurve RateCurve::exponential(double coef, double growth, double end) {
    return RateCurve({ExpPiece{0.0, end, coef, growth}});
}

RateCurve RateCurve::constant(double level, double end) {
    return RateCurve({ExpPiece{0.0, end, level, 0.0}});
}

RateCurve RateCurve::step(std::span<const double> times, std::span<const double> values) {
    if (times.size() != values.size() + 1)
        throw InvalidArgument("step curve needs one more time than values");
    std::vector<ExpPiece> pieces;
    pieces.reserve(values.size());
    for (std::size_t i = 0; i < values.size(); ++i)
        pieces.push_back({times[i], times[i + 1], values[i], 0.0});
    return RateCurve(std::move(pieces));
}

std::size_t RateCurve::piece_after(double t) const {
    // first piece whose end is strictly beyond t
    auto it = std::upper_bound(pieces_.begin(), pieces_.end(), t,
                               [](double v, const ExpPiece& p) { return v < p.end; });
    if (it == pieces_.end()) return pieces_.size() - 1;
    return static_cast<std::size_t>(it - pieces_.begin());
}

double RateCurve::value(double t) const {
    if (t <= 0.0) return pieces_.front().value(t);
    // first piece with end >= t
    auto it = std::lower_bound(pieces_.begin(), pieces_.end(), t,
                               [](const ExpPiece& p, double v) { return p.end < v; });
    if (it == pieces_.end()) it = std::prev(pieces_.end());
    return it->value(t);
}

double RateCurve::right_value(double t) const { return pieces_[piece_after(t)].value(t); }

std::vector<ExpPiece> RateCurve::clipped(double a, double b) const {
    std::vector<ExpPiece> out;
    if (!(b > a)) return out;
    for (std::size_t i = piece_after(a); i < pieces_.size(); ++i) {
        const auto& p = pieces_[i];
        if (p.start >= b) break;
        const double s = std::max(a, p.start), e = std::min(b, p.end);
        if (e > s) out.push_back({s, e, p.coef, p.growth});
    }
    return out;
}

double RateCurve::integral(double a, double b, double discount) const {
    if (b == a) return 0.0;
    if (b < a) return -integral(b, a, discount);
    double total = 0.0;
    for (std::size_t i = piece_after(a); i < pieces_.size(); ++i) {
        const auto& p = pieces_[i];
        if (p.start >= b) break;
        const double s = std::max(a, p.start), e = std::min(b, p.end);
        if (e > s) total += p.coef * numerics::exp_integral(p.growth - discount, s, e);
    }
    return total;
}

}  // namespace loancost
