#include "loancost/app/verify.hpp"

#include <cmath>
#include <cstdio>
#include <random>
#include <stdexcept>

#include "loancost/loancost.hpp"

namespace loancost::app {

namespace {

struct Instance {
    LoanTerms terms;
    PaymentBounds bounds;
};

Instance draw_instance(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const LoanTerms terms(0.01 + 0.05 * u(rng), 0.01 + 0.07 * u(rng), 0.15 + 0.5 * u(rng),
                          10.0 + 20.0 * u(rng));
    const double f_min = 0.05 + 0.1 * u(rng);
    const double f_max = f_min + 0.05 + 0.25 * u(rng);
    auto bounds = bounds_from_profile({32.0 + 20.0 + 60.0 * u(rng), 32.0, 0.05 * u(rng), f_min, f_max});
    return {terms, std::move(bounds)};
}

// Random bang-bang / constant mixture that is admissible for nondecreasing exponential bounds.
Strategy draw_strategy(std::mt19937_64& rng, const Instance& in) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double T = in.terms.horizon();
    const int n = 1 + static_cast<int>(u(rng) * 5);
    std::vector<double> ends;
    for (int i = 0; i + 1 < n; ++i) ends.push_back(T * u(rng));
    ends.push_back(T);
    std::sort(ends.begin(), ends.end());
    ends.erase(std::unique(ends.begin(), ends.end(),
                           [](double a, double b) { return b - a < 1e-6; }),
               ends.end());
    ends.back() = T;
    std::vector<StrategySegment> segs;
    double start = 0.0;
    for (double e : ends) {
        const double pick = u(rng);
        const double lo = in.bounds.min_rate(e), hi = in.bounds.max_rate(start);
        if (pick < 0.35)
            segs.push_back({e, MinRate{}});
        else if (pick < 0.7 || !(hi > lo))
            segs.push_back({e, MaxRate{}});
        else
            segs.push_back({e, ConstantRate{lo + (hi - lo) * u(rng)}});
        start = e;
    }
    return Strategy(std::move(segs), T);
}

class Report {
public:
    explicit Report(std::ostream& out) : out_(out) {}

    void check(bool ok, const std::string& name, const std::string& detail) {
        out_ << (ok ? "PASS " : "FAIL ") << name << ": " << detail << "\n";
        all_ &= ok;
    }
    [[nodiscard]] bool ok() const { return all_; }

private:
    std::ostream& out_;
    bool all_ = true;
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

void suite_marginal(Report& rep) {
    const LoanTerms terms(0.03, 0.04, 0.4, 25.0);
    const double c = marginal_cost(terms, InterestMode::Compound);
    const double s = marginal_cost(terms, InterestMode::Simple);
    rep.check(std::abs(c - 1.09) <= 0.005, "marginal.compound", fmt("%.6f vs 1.09", c));
    rep.check(std::abs(s - 0.52) <= 0.005, "marginal.simple", fmt("%.6f vs 0.52", s));
}

void suite_theorem_vs_dp(Report& rep) {
    std::mt19937_64 rng(20240601);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int passed = 0;
    double worst = 0.0;
    for (int i = 0; i < 10; ++i) {
        const auto in = draw_instance(rng);
        const auto th = thresholds(in.terms, in.bounds);
        const double x = th.x_hat + (1.3 * th.x_upper - th.x_hat) * u(rng);
        const double thm = optimal_strategy_compound(in.terms, in.bounds, x).valuation.cost;
        const auto dp = dp_oracle(in.terms, x, in.bounds, 64, 128);
        const double rel = std::abs(thm - dp.cost) / dp.cost;
        worst = std::max(worst, rel);
        if (thm <= dp.cost + dp.refinement_delta + 1e-9 && rel <= 0.01) ++passed;
    }
    rep.check(passed == 10, "theorem-vs-dp", fmt("%.0f/10 instances, worst relative gap %.2e", passed, worst));
}

void suite_comparison(Report& rep) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int passed = 0;
    for (int i = 0; i < 100; ++i) {
        const auto in = draw_instance(rng);
        const auto s = draw_strategy(rng, in);
        const double x = 20.0 + 250.0 * u(rng);
        const auto simple = simulate(in.terms, x, s, in.bounds, 0.1, InterestMode::Simple);
        const RateCurve alpha = realize(s, in.bounds);
        bool ok = true;
        for (const auto& smp : simple.samples) {
            const double b = balance_compound(in.terms, x, alpha, smp.t);
            if (smp.balance > b + 1e-8 * std::max(1.0, std::abs(b))) ok = false;
        }
        passed += ok;
    }
    rep.check(passed == 100, "comparison", fmt("%.0f/100 draws with simple <= compound balance", passed));
}

void suite_improvement(Report& rep) {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int interest_ok = 0, interest_n = 0, principal_ok = 0, principal_n = 0;
    for (int i = 0; i < 200; ++i) {
        const auto in = draw_instance(rng);
        const auto s = draw_strategy(rng, in);
        const double x = 20.0 + 250.0 * u(rng);
        const double base = cost(in.terms, x, s, in.bounds, InterestMode::Simple).cost;
        const auto ip = improve_interest_phase(in.terms, x, s, in.bounds);
        const double c1 = cost(in.terms, x, ip.strategy, in.bounds, InterestMode::Simple).cost;
        ++interest_n;
        if (ip.kind == InterestPhaseResult::Kind::MinOnlyDominates) {
            interest_ok += c1 <= base + 1e-9 * std::max(1.0, base);
        } else {
            const double th = principal_clock(in.terms, x, ip.strategy, in.bounds);
            interest_ok += c1 <= base + 1e-9 * std::max(1.0, base) && std::abs(th - ip.theta) <= 1e-10;
        }
        const double T = in.terms.horizon();
        const double a = ip.theta + (T - ip.theta) * 0.3 * u(rng);
        const double c = a + (T - a) * (0.2 + 0.8 * u(rng));
        try {
            const auto pp = improve_principal_phase(in.terms, x, s, in.bounds, a, c);
            if (pp.kind == PrincipalPhaseResult::Kind::Improved) {
                ++principal_n;
                principal_ok += cost(in.terms, x, pp.strategy, in.bounds, InterestMode::Simple).cost < base;
            }
        } catch (const DomainError&) {
        }
    }
    rep.check(interest_ok == interest_n, "improvement.interest-phase",
              fmt("%.0f/%.0f never increase cost and keep theta", interest_ok, interest_n));
    rep.check(principal_ok == principal_n, "improvement.principal-phase",
              fmt("%.0f/%.0f strictly decrease cost", principal_ok, principal_n));
}

void suite_monotonicity(Report& rep) {
    const LoanTerms terms(0.03, 0.04, 0.4, 25.0);
    const auto bounds = bounds_from_profile(reference_profile());
    const auto th = thresholds(terms, bounds);
    bool v_ok = true;
    double prev = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= 512; ++i) {
        const double x = th.x_hat + (th.x_upper - th.x_hat) * i / 512.0;
        if (x <= 0.0) continue;
        const double d = value_v1(terms, bounds, x) - value_v2(terms, bounds, x).value;
        if (!(d < prev)) v_ok = false;
        prev = d;
    }
    rep.check(v_ok, "monotonicity.v1-v2", "v1 - v2 strictly decreasing on [x_hat, x_upper]");

    bool r_ok = true;
    double last = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= 20; ++i) {
        const double r = 0.01 + 0.07 * i / 20.0;
        const double xs = critical_balance(LoanTerms(r, 0.04, 0.4, 25.0), bounds);
        if (xs > last + 1e-9) r_ok = false;
        last = xs;
    }
    rep.check(r_ok, "monotonicity.x-star-in-r", "x* nonincreasing in r");

    bool c_ok = true;
    const auto s = Strategy::max_min(th.t_c, terms.horizon());
    for (auto mode : {InterestMode::Compound, InterestMode::Simple}) {
        double prev_cost = 0.0;
        for (int i = 1; i <= 100; ++i) {
            const double c = cost(terms, 3.0 * i, s, bounds, mode).cost;
            if (c < prev_cost - 1e-9) c_ok = false;
            prev_cost = c;
        }
    }
    rep.check(c_ok, "monotonicity.cost-in-x", "cost nondecreasing in x for a fixed strategy");
}

}  // namespace

const std::vector<std::string>& verify_suites() {
    static const std::vector<std::string> names{"theorem-vs-dp", "comparison", "marginal",
                                                "improvement", "monotonicity"};
    return names;
}

bool run_verify(const std::string& suite, std::ostream& out) {
    Report rep(out);
    auto run = [&](const std::string& name) {
        if (name == "theorem-vs-dp")
            suite_theorem_vs_dp(rep);
        else if (name == "comparison")
            suite_comparison(rep);
        else if (name == "marginal")
            suite_marginal(rep);
        else if (name == "improvement")
            suite_improvement(rep);
        else if (name == "monotonicity")
            suite_monotonicity(rep);
        else
            throw std::invalid_argument("unknown verify suite: " + name);
    };
    if (suite == "all")
        for (const auto& name : verify_suites()) run(name);
    else
        run(suite);
    return rep.ok();
}

}  // namespace loancost::app
