#include "loancost/model.hpp"

#include <cmath>
#include <set>
#include <sstream>

#include "loancost/errors.hpp"

namespace loancost {

std::string_view to_string(InterestMode mode) noexcept {
    return mode == InterestMode::Compound ? "compound" : "simple";
}

std::string_view to_string(StopKind kind) noexcept {
    return kind == StopKind::PaidOff ? "paid_off" : "forgiven";
}

std::optional<InterestMode> parse_mode(std::string_view text) noexcept {
    if (text == "compound") return InterestMode::Compound;
    if (text == "simple") return InterestMode::Simple;
    return std::nullopt;
}

LoanTerms::LoanTerms(double r, double beta, double omega, double horizon)
    : r_(r), beta_(beta), omega_(omega), horizon_(horizon) {
    if (!std::isfinite(r) || !(r > 0.0)) throw InvalidArgument("discount rate r must be > 0");
    if (!std::isfinite(beta) || !(beta > 0.0)) throw InvalidArgument("spread beta must be > 0");
    if (!std::isfinite(omega) || !(omega > 0.0 && omega < 1.0))
        throw InvalidArgument("tax rate omega must lie in (0, 1)");
    if (!std::isfinite(horizon) || !(horizon > 0.0))
        throw InvalidArgument("forgiveness horizon T must be > 0");
}

// --- PaymentBounds --------------------------------------------------------------------------

namespace {

// Checks lo(t) < hi(t) at both ends of every interval on which both are analytic.
bool strictly_below(const RateCurve& lo, const RateCurve& hi, double until) {
    std::set<double> cuts{0.0};
    for (const auto& p : lo.pieces()) cuts.insert(std::min(p.end, until));
    for (const auto& p : hi.pieces()) cuts.insert(std::min(p.end, until));
    cuts.insert(until);
    double prev = 0.0;
    bool first = true;
    for (double c : cuts) {
        if (first) {
            first = false;
            continue;
        }
        if (!(c > prev)) continue;
        const auto& lp = lo.pieces()[lo.piece_after(prev)];
        const auto& hp = hi.pieces()[hi.piece_after(prev)];
        if (!(lp.value(prev) > 0.0) || !(lp.value(c) > 0.0)) return false;
        if (!(lp.value(prev) < hp.value(prev)) || !(lp.value(c) < hp.value(c))) return false;
        prev = c;
    }
    return true;
}

}  // namespace

PaymentBounds::PaymentBounds(RateCurve min, RateCurve max,
                             std::variant<ExponentialIncome, TabulatedBounds> repr)
    : min_(std::move(min)), max_(std::move(max)), repr_(std::move(repr)) {}

PaymentBounds PaymentBounds::exponential_income(const ExponentialIncome& p) {
    const double capacity = p.income - p.subsistence;
    if (!std::isfinite(p.income) || !std::isfinite(p.subsistence) || !std::isfinite(p.growth) ||
        !std::isfinite(p.f_min) || !std::isfinite(p.f_max))
        throw InvalidArgument("income profile has non-finite fields");
    if (!(capacity > 0.0))
        throw InvalidArgument("income must exceed subsistence for a positive minimum payment");
    if (!(p.f_min > 0.0)) throw InvalidArgument("f_min must be > 0");
    if (!(p.f_max > p.f_min)) throw InvalidArgument("f_max must exceed f_min");
    return PaymentBounds(RateCurve::exponential(p.f_min * capacity, p.growth),
                         RateCurve::exponential(p.f_max * capacity, p.growth), p);
}

PaymentBounds PaymentBounds::tabulated(TabulatedBounds table) {
    const auto& t = table.times;
    if (t.size() < 2) throw InvalidArgument("tabulated bounds need at least two grid times");
    if (table.min.size() + 1 != t.size() || table.max.size() + 1 != t.size())
        throw InvalidArgument("tabulated bounds need one min and one max value per grid cell");
    if (t.front() != 0.0) throw InvalidArgument("tabulated bounds grid must start at 0");
    for (std::size_t i = 0; i + 1 < t.size(); ++i) {
        if (!std::isfinite(t[i + 1]) || !(t[i + 1] > t[i]))
            throw InvalidArgument("tabulated bounds grid must be strictly increasing");
        if (!std::isfinite(table.min[i]) || !std::isfinite(table.max[i]))
            throw InvalidArgument("tabulated bounds contain non-finite values");
        if (!(table.min[i] > 0.0)) throw InvalidArgument("minimum payment must be > 0");
        if (!(table.min[i] < table.max[i]))
            throw InvalidArgument("minimum payment must be below maximum payment");
    }
    auto lo = RateCurve::step(t, table.min);
    auto hi = RateCurve::step(t, table.max);
    return PaymentBounds(std::move(lo), std::move(hi), std::move(table));
}

PaymentBounds PaymentBounds::constant(double min_rate, double max_rate) {
    const double inf = std::numeric_limits<double>::infinity();
    if (!std::isfinite(min_rate) || !(min_rate > 0.0))
        throw InvalidArgument("minimum payment must be > 0");
    if (!std::isfinite(max_rate) || !(max_rate > min_rate))
        throw InvalidArgument("minimum payment must be below maximum payment");
    TabulatedBounds table{{0.0, inf}, {min_rate}, {max_rate}};
    return PaymentBounds(RateCurve::constant(min_rate), RateCurve::constant(max_rate),
                         std::move(table));
}

bool PaymentBounds::min_nondecreasing() const {
    const auto pieces = min_.pieces();
    for (std::size_t i = 0; i < pieces.size(); ++i) {
        if (pieces[i].growth < 0.0) return false;
        if (i + 1 < pieces.size() &&
            pieces[i + 1].value(pieces[i + 1].start) < pieces[i].value(pieces[i].end))
            return false;
    }
    return true;
}

void require_coverage(const LoanTerms& terms, const PaymentBounds& bounds) {
    if (bounds.coverage() < terms.horizon())
        throw InvalidArgument("payment bounds do not cover the forgiveness horizon");
    if (!strictly_below(bounds.min_curve(), bounds.max_curve(), terms.horizon()))
        throw InvalidArgument("payment bounds must satisfy 0 < m(t) < M(t) on [0, T]");
}

// --- Strategy -------------------------------------------------------------------------------

namespace {

void validate_policy(const Policy& policy) {
    if (const auto* c = std::get_if<ConstantRate>(&policy)) {
        if (!std::isfinite(c->level) || c->level < 0.0)
            throw InvalidArgument("constant payment level must be finite and >= 0");
    } else if (const auto* tab = std::get_if<TabulatedRate>(&policy)) {
        if (tab->times.size() < 2 || tab->values.size() + 1 != tab->times.size())
            throw InvalidArgument("tabulated policy needs one more time than values");
        for (std::size_t i = 0; i + 1 < tab->times.size(); ++i) {
            if (!(tab->times[i + 1] > tab->times[i]))
                throw InvalidArgument("tabulated policy times must increase");
            if (!std::isfinite(tab->values[i]) || tab->values[i] < 0.0)
                throw InvalidArgument("tabulated policy values must be finite and >= 0");
        }
    }
}

void append_clipped(std::vector<StrategySegment>& out, std::span<const StrategySegment> segs,
                    double a, double b) {
    double start = 0.0;
    for (const auto& s : segs) {
        const double lo = std::max(start, a), hi = std::min(s.end, b);
        if (hi > lo) out.push_back({hi, s.policy});
        start = s.end;
    }
}

}  // namespace

Strategy::Strategy(std::vector<StrategySegment> segments, double horizon) : horizon_(horizon) {
    if (!std::isfinite(horizon) || !(horizon > 0.0))
        throw InvalidArgument("strategy horizon must be > 0");
    if (segments.empty()) throw InvalidArgument("strategy needs at least one segment");
    double prev = 0.0;
    for (auto& s : segments) {
        validate_policy(s.policy);
        if (!std::isfinite(s.end) || !(s.end > prev))
            throw InvalidArgument("strategy segment end times must be strictly increasing");
        prev = s.end;
    }
    if (std::abs(segments.back().end - horizon) > 1e-12 * std::max(1.0, horizon))
        throw InvalidArgument("last strategy segment must end at the horizon");
    segments.back().end = horizon;
    for (auto& s : segments) {
        if (!segments_.empty() && segments_.back().policy == s.policy)
            segments_.back().end = s.end;
        else
            segments_.push_back(std::move(s));
    }
}

Strategy Strategy::max_only(double horizon) { return Strategy({{horizon, MaxRate{}}}, horizon); }

Strategy Strategy::min_only(double horizon) { return Strategy({{horizon, MinRate{}}}, horizon); }

Strategy Strategy::max_min(double t0, double horizon) {
    if (!(t0 > 0.0)) return min_only(horizon);
    if (t0 >= horizon) return max_only(horizon);
    return Strategy({{t0, MaxRate{}}, {horizon, MinRate{}}}, horizon);
}

Strategy Strategy::min_max_min(double t0, double t1, double horizon) {
    t0 = std::clamp(t0, 0.0, horizon);
    t1 = std::clamp(t1, t0, horizon);
    std::vector<StrategySegment> segs;
    if (t0 > 0.0) segs.push_back({t0, MinRate{}});
    if (t1 > t0) segs.push_back({t1, MaxRate{}});
    if (horizon > t1) segs.push_back({horizon, MinRate{}});
    return Strategy(std::move(segs), horizon);
}

std::string Strategy::label() const {
    std::string kinds;
    for (const auto& s : segments_) {
        if (std::holds_alternative<MaxRate>(s.policy))
            kinds += 'M';
        else if (std::holds_alternative<MinRate>(s.policy))
            kinds += 'm';
        else
            kinds += 'c';
    }
    if (kinds == "M") return "max";
    if (kinds == "m") return "min-only";
    if (kinds == "Mm") return "max-min";
    if (kinds == "mM") return "min-max";
    if (kinds == "mMm") return "min-max-min";
    return "custom";
}

std::vector<double> Strategy::switch_times() const {
    std::vector<double> out;
    for (std::size_t i = 0; i + 1 < segments_.size(); ++i) out.push_back(segments_[i].end);
    return out;
}

Strategy Strategy::overlay(double from, double to, const Strategy& middle) const {
    from = std::clamp(from, 0.0, horizon_);
    to = std::clamp(to, from, horizon_);
    std::vector<StrategySegment> out;
    append_clipped(out, segments_, 0.0, from);
    append_clipped(out, middle.segments(), from, to);
    append_clipped(out, segments_, to, horizon_);
    return Strategy(std::move(out), horizon_);
}

// --- realization ----------------------------------------------------------------------------

namespace {

void check_admissible(const RateCurve& alpha, const PaymentBounds& bounds, double horizon) {
    std::set<double> cuts{0.0, horizon};
    for (const auto* curve : {&alpha, &bounds.min_curve(), &bounds.max_curve()})
        for (const auto& p : curve->pieces())
            if (p.end < horizon) cuts.insert(p.end);
    double prev = -1.0;
    for (double c : cuts) {
        if (prev < 0.0) {
            prev = c;
            continue;
        }
        const auto& a = alpha.pieces()[alpha.piece_after(prev)];
        const auto& lo = bounds.min_curve().pieces()[bounds.min_curve().piece_after(prev)];
        const auto& hi = bounds.max_curve().pieces()[bounds.max_curve().piece_after(prev)];
        for (double t : {prev, c}) {
            const double v = a.value(t), m = lo.value(t), M = hi.value(t);
            const double slack = 1e-10 * std::max(1.0, M);
            if (v < m - slack || v > M + slack) {
                std::ostringstream msg;
                msg << "strategy rate " << v << " at t = " << t << " is outside [" << m << ", " << M
                    << "]";
                throw AdmissibilityError(msg.str());
            }
        }
        prev = c;
    }
}

}  // namespace

RateCurve realize(const Strategy& strategy, const PaymentBounds& bounds) {
    const double horizon = strategy.horizon();
    if (bounds.coverage() < horizon)
        throw InvalidArgument("payment bounds do not cover the strategy horizon");
    std::vector<ExpPiece> pieces;
    double start = 0.0;
    for (const auto& seg : strategy.segments()) {
        const double end = seg.end;
        std::visit(
            [&](const auto& pol) {
                using P = std::decay_t<decltype(pol)>;
                if constexpr (std::is_same_v<P, MinRate>) {
                    for (auto& p : bounds.min_curve().clipped(start, end)) pieces.push_back(p);
                } else if constexpr (std::is_same_v<P, MaxRate>) {
                    for (auto& p : bounds.max_curve().clipped(start, end)) pieces.push_back(p);
                } else if constexpr (std::is_same_v<P, ConstantRate>) {
                    pieces.push_back({start, end, pol.level, 0.0});
                } else {
                    if (pol.times.front() > start || pol.times.back() < end)
                        throw InvalidArgument("tabulated policy does not cover its segment");
                    for (std::size_t i = 0; i < pol.values.size(); ++i) {
                        const double s = std::max(start, pol.times[i]);
                        const double e = std::min(end, pol.times[i + 1]);
                        if (e > s) pieces.push_back({s, e, pol.values[i], 0.0});
                    }
                }
            },
            seg.policy);
        start = end;
    }
    RateCurve alpha(std::move(pieces));
    check_admissible(alpha, bounds, horizon);
    return alpha;
}

}  // namespace loancost
