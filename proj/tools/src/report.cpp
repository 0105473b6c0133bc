#include "loancost/app/report.hpp"

#include <cmath>
#include <cstdio>

#include "loancost/dynamics.hpp"
#include "loancost/errors.hpp"
#include "loancost/parallel.hpp"
#include "loancost/simple_interest.hpp"
#include "loancost/theorem.hpp"

namespace loancost::app {

using nlohmann::json;

namespace {

std::string fixed6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v == 0.0 ? 0.0 : v);
    return buf;
}

std::string num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", v == 0.0 ? 0.0 : v);
    return buf;
}

std::string csv_header(const char* kind, const Config& cfg) {
    const auto& t = cfg.terms;
    return std::string("# loancost ") + kind + " v1; mode=" + std::string(to_string(cfg.mode)) +
           "; r=" + num(t.r()) + "; beta=" + num(t.beta()) + "; omega=" + num(t.omega()) +
           "; T=" + num(t.horizon()) + "; currency=thousands USD; time=years; rates=decimal\n";
}

json thresholds_json(const Thresholds& th) {
    return {{"t_c", th.t_c},          {"t_star", th.t_star},   {"x_star", currency(th.x_star)},
            {"x_lower", currency(th.x_lower)}, {"x_upper", currency(th.x_upper)},
            {"x_c", currency(th.x_c)}, {"x_hat", currency(th.x_hat)}};
}

json result_json(const ValuationResult& v) {
    return {{"cost", currency(v.cost)},
            {"tau", v.tau},
            {"stop_kind", std::string(to_string(v.stop_kind))},
            {"forgiven_balance", currency(v.forgiven_balance)},
            {"tax_payment", currency(v.tax_payment)}};
}

struct Chosen {
    ValuationResult valuation;
    bool heuristic;
};

Chosen optimum(const Config& cfg) {
    if (cfg.mode == InterestMode::Compound)
        return {optimal_strategy_compound(cfg.terms, cfg.bounds, cfg.x).valuation, false};
    auto s = optimize_simple(cfg.terms, cfg.x, cfg.bounds, cfg.grid_n);
    return {std::move(s.valuation), s.heuristic};
}

void require_positive(double x) {
    if (!std::isfinite(x) || !(x > 0.0)) throw DomainError("initial balance x must be > 0");
}

}  // namespace

json currency(double value) { return {{"decimal", fixed6(value)}, {"raw", value}}; }

std::string render_json(const json& doc) { return doc.dump(2) + "\n"; }

json valuation_json(const Config& cfg) {
    require_positive(cfg.x);
    Chosen chosen{};
    if (cfg.strategy) {
        chosen = {cost(cfg.terms, cfg.x, *cfg.strategy, cfg.bounds, cfg.mode), false};
        if (cfg.strategy->label() == "max" && chosen.valuation.stop_kind == StopKind::Forgiven)
            throw DomainError("maximum payments cannot repay this balance before forgiveness");
    } else {
        chosen = optimum(cfg);
    }
    const auto& v = chosen.valuation;
    const RegimeClass regime = classify_regime(cfg.terms, cfg.x, cfg.bounds);
    json out{{"schema", "loancost.valuation/1"},
             {"mode", std::string(to_string(cfg.mode))},
             {"x", currency(cfg.x)},
             {"regime", std::string(to_string(regime))},
             {"heuristic", chosen.heuristic},
             {"strategy", strategy_to_json(v.strategy)},
             {"cost_over_x", v.cost / cfg.x},
             {"marginal_cost", marginal_cost(cfg.terms, cfg.mode)},
             {"thresholds", thresholds_json(thresholds(cfg.terms, cfg.bounds))}};
    out.update(result_json(v));
    out["theta"] = cfg.mode == InterestMode::Simple
                       ? json(principal_clock(cfg.terms, cfg.x, v.strategy, cfg.bounds))
                       : json(nullptr);
    return out;
}

std::string valuation_text(const json& v) {
    std::string out;
    auto line = [&](const char* key, const std::string& value) {
        char buf[256];
        std::snprintf(buf, sizeof buf, "%-20s%s\n", key, value.c_str());
        out += buf;
    };
    out += "loancost valuation (" + v.at("mode").get<std::string>() + " interest)\n";
    line("balance x", v.at("x").at("decimal").get<std::string>());
    line("regime", v.at("regime").get<std::string>());
    std::string label = v.at("strategy").at("label").get<std::string>();
    if (v.at("heuristic").get<bool>()) label += " (heuristic search)";
    line("strategy", label);
    double start = 0.0;
    for (const auto& seg : v.at("strategy").at("segments")) {
        const double end = seg.at("end").get<double>();
        const auto& p = seg.at("policy");
        const std::string policy = p.is_string() ? p.get<std::string>() : p.dump();
        out += "  [" + fixed6(start) + ", " + fixed6(end) + "]  " + policy + "\n";
        start = end;
    }
    line("cost", v.at("cost").at("decimal").get<std::string>());
    line("cost / x", fixed6(v.at("cost_over_x").get<double>()));
    line("stop", v.at("stop_kind").get<std::string>() + " at t = " + fixed6(v.at("tau").get<double>()));
    line("forgiven balance", v.at("forgiven_balance").at("decimal").get<std::string>());
    line("tax payment (PV)", v.at("tax_payment").at("decimal").get<std::string>());
    if (!v.at("theta").is_null()) line("theta", fixed6(v.at("theta").get<double>()));
    const auto& th = v.at("thresholds");
    line("t_c", fixed6(th.at("t_c").get<double>()));
    line("t*", fixed6(th.at("t_star").get<double>()));
    line("x*", th.at("x_star").at("decimal").get<std::string>());
    line("marginal cost", fixed6(v.at("marginal_cost").get<double>()));
    return out;
}

std::string valuation_csv(const json& v) {
    std::string out = "# loancost valuation v1; currency=thousands USD; time=years; rates=decimal\n";
    out += "x,mode,regime,strategy,heuristic,cost,cost_over_x,tau,stop_kind,forgiven_balance,tax_payment\n";
    out += v.at("x").at("decimal").get<std::string>() + "," + v.at("mode").get<std::string>() + "," +
           v.at("regime").get<std::string>() + "," + v.at("strategy").at("label").get<std::string>() +
           "," + (v.at("heuristic").get<bool>() ? "true" : "false") + "," +
           v.at("cost").at("decimal").get<std::string>() + "," +
           num(v.at("cost_over_x").get<double>()) + "," + num(v.at("tau").get<double>()) + "," +
           v.at("stop_kind").get<std::string>() + "," +
           v.at("forgiven_balance").at("decimal").get<std::string>() + "," +
           v.at("tax_payment").at("decimal").get<std::string>() + "\n";
    return out;
}

json trajectory_json(const Config& cfg) {
    require_positive(cfg.x);
    const Strategy strategy = cfg.strategy ? *cfg.strategy : optimum(cfg).valuation.strategy;
    const auto traj = simulate(cfg.terms, cfg.x, strategy, cfg.bounds, cfg.step, cfg.mode);
    json samples = json::array();
    for (const auto& s : traj.samples)
        samples.push_back({{"t", s.t},
                           {"balance", s.balance},
                           {"principal", s.principal},
                           {"rate", s.rate},
                           {"discounted_paid", s.discounted_paid}});
    json events = json::array();
    for (const auto& e : traj.events) {
        const char* kind = e.kind == EventKind::PaidOff                  ? "paid-off"
                           : e.kind == EventKind::PrincipalStartsFalling ? "principal-starts-falling"
                                                                         : "interest-accrues";
        events.push_back({{"t", e.t}, {"kind", kind}});
    }
    return {{"schema", "loancost.trajectory/1"},
            {"mode", std::string(to_string(cfg.mode))},
            {"x", currency(cfg.x)},
            {"strategy", strategy_to_json(strategy)},
            {"tau", traj.tau},
            {"stop_kind", std::string(to_string(traj.stop_kind))},
            {"theta", traj.theta},
            {"events", std::move(events)},
            {"samples", std::move(samples)}};
}

json compare_json(const Config& cfg) {
    require_positive(cfg.x);
    const double T = cfg.terms.horizon();
    std::vector<std::pair<std::string, Strategy>> list;
    if (cfg.strategies.empty()) {
        list.emplace_back("max", Strategy::max_only(T));
        list.emplace_back("min-only", Strategy::min_only(T));
        list.emplace_back("max-min", Strategy::max_min(critical_horizon(cfg.terms), T));
    } else {
        for (const auto& s : cfg.strategies) list.emplace_back(s.label(), s);
    }
    json results = json::array();
    for (const auto& [name, s] : list) {
        json item{{"name", name}, {"strategy", strategy_to_json(s)}};
        try {
            item.update(result_json(cost(cfg.terms, cfg.x, s, cfg.bounds, cfg.mode)));
        } catch (const std::domain_error& e) {
            item["error"] = e.what();
        }
        results.push_back(std::move(item));
    }
    const auto best = optimum(cfg);
    json opt{{"name", "optimal"}, {"strategy", strategy_to_json(best.valuation.strategy)},
             {"heuristic", best.heuristic}};
    opt.update(result_json(best.valuation));
    return {{"schema", "loancost.compare/1"},
            {"mode", std::string(to_string(cfg.mode))},
            {"x", currency(cfg.x)},
            {"results", std::move(results)},
            {"optimal", std::move(opt)}};
}

Axis default_frontier_axis(const Config& cfg) {
    const double hi = 2.0 * thresholds(cfg.terms, cfg.bounds).x_upper;
    return {hi / 100.0, hi, 100};
}

std::vector<FrontierRow> frontier(const Config& cfg, const Axis& axis) {
    std::vector<FrontierRow> rows(static_cast<std::size_t>(axis.steps));
    parallel_for(rows.size(), [&](std::size_t i) {
        Config point = cfg;
        point.x = axis.at(static_cast<int>(i));
        point.strategy.reset();
        const auto v = optimum(point).valuation;
        rows[i] = {point.x, v.cost, v.cost / point.x, v.strategy.label(), v.tau};
    });
    return rows;
}

json frontier_json(const Config& cfg, const Axis& axis, const std::vector<FrontierRow>& rows) {
    json list = json::array();
    for (const auto& r : rows)
        list.push_back({{"x", r.x},
                        {"cost", currency(r.cost)},
                        {"cost_over_x", r.cost_over_x},
                        {"strategy", r.strategy},
                        {"tau", r.tau}});
    return {{"schema", "loancost.frontier/1"},
            {"mode", std::string(to_string(cfg.mode))},
            {"axis", {{"lo", axis.lo}, {"hi", axis.hi}, {"steps", axis.steps}}},
            {"marginal_cost", marginal_cost(cfg.terms, cfg.mode)},
            {"rows", std::move(list)}};
}

std::string frontier_csv(const Config& cfg, const std::vector<FrontierRow>& rows) {
    std::string out = csv_header("frontier", cfg) + "x,cost,cost_over_x,strategy,tau\n";
    for (const auto& r : rows)
        out += num(r.x) + "," + fixed6(r.cost) + "," + num(r.cost_over_x) + "," + r.strategy + "," +
               num(r.tau) + "\n";
    return out;
}

Axis default_beta_axis() { return {0.01, 0.08, 15}; }
Axis default_r_axis() { return {0.01, 0.08, 15}; }

std::vector<ContourRow> contour(const Config& cfg, const Axis& beta, const Axis& r) {
    const auto nb = static_cast<std::size_t>(beta.steps), nr = static_cast<std::size_t>(r.steps);
    std::vector<ContourRow> rows(nb * nr);
    parallel_for(rows.size(), [&](std::size_t idx) {
        const double b = beta.at(static_cast<int>(idx / nr)), rr = r.at(static_cast<int>(idx % nr));
        const LoanTerms terms(rr, b, cfg.terms.omega(), cfg.terms.horizon());
        const auto th = thresholds(terms, cfg.bounds);
        rows[idx] = {b, rr, th.x_star, th.t_c, th.t_star};
    });
    return rows;
}

json contour_json(const Config& cfg, const std::vector<ContourRow>& rows) {
    json list = json::array();
    for (const auto& r : rows)
        list.push_back({{"beta", r.beta},
                        {"r", r.r},
                        {"x_star", currency(r.x_star)},
                        {"t_c", r.t_c},
                        {"t_star", r.t_star}});
    return {{"schema", "loancost.contour/1"},
            {"omega", cfg.terms.omega()},
            {"T", cfg.terms.horizon()},
            {"rows", std::move(list)}};
}

std::string contour_csv(const Config& cfg, const std::vector<ContourRow>& rows) {
    std::string out = csv_header("contour", cfg) + "beta,r,x_star,t_c,t_star\n";
    for (const auto& r : rows)
        out += num(r.beta) + "," + num(r.r) + "," + fixed6(r.x_star) + "," + num(r.t_c) + "," +
               num(r.t_star) + "\n";
    return out;
}

double frontier_evaluations(const Config& cfg, const Axis& axis) {
    const double n = cfg.grid_n;
    const double per_point = cfg.mode == InterestMode::Compound ? 1.0 : (n + 1) * (n + 2) / 2 + 400;
    return per_point * axis.steps;
}

}  // namespace loancost::app
