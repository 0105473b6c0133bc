#include "loancost/app/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "loancost/errors.hpp"
#include "loancost/schedules.hpp"

namespace loancost::app {

using nlohmann::json;

namespace {

std::string join(const std::vector<FieldError>& fields) {
    std::string out = "invalid config";
    for (const auto& f : fields) out += "; " + f.field + ": " + f.message;
    return out;
}

class Reader {
public:
    std::vector<FieldError> errors;

    void fail(std::string field, std::string message) {
        errors.push_back({std::move(field), std::move(message)});
    }

    // Returns nullopt (recording an error when required) if absent or not a finite number.
    std::optional<double> number(const json& obj, const char* key, const std::string& path,
                                 bool required = true) {
        const std::string field = path.empty() ? key : path + "." + key;
        if (!obj.contains(key)) {
            if (required) fail(field, "is required");
            return std::nullopt;
        }
        const auto& v = obj.at(key);
        if (!v.is_number()) {
            fail(field, "must be a number");
            return std::nullopt;
        }
        const double d = v.get<double>();
        if (!std::isfinite(d)) {
            fail(field, "must be finite");
            return std::nullopt;
        }
        return d;
    }

    std::optional<std::vector<double>> numbers(const json& obj, const char* key,
                                               const std::string& path) {
        const std::string field = path + "." + key;
        if (!obj.contains(key) || !obj.at(key).is_array()) {
            fail(field, "must be an array of numbers");
            return std::nullopt;
        }
        std::vector<double> out;
        for (const auto& v : obj.at(key)) {
            if (!v.is_number() || !std::isfinite(v.get<double>())) {
                fail(field, "must contain only finite numbers");
                return std::nullopt;
            }
            out.push_back(v.get<double>());
        }
        return out;
    }

    bool object(const json& doc, const char* key) {
        if (!doc.contains(key)) return false;
        if (!doc.at(key).is_object()) {
            fail(key, "must be an object");
            return false;
        }
        return true;
    }

    std::optional<Axis> axis(const json& node, const std::string& field) {
        if (!node.is_object()) {
            fail(field, "must be an object with lo, hi, steps");
            return std::nullopt;
        }
        const auto lo = number(node, "lo", field);
        const auto hi = number(node, "hi", field);
        const auto steps = number(node, "steps", field);
        if (!lo || !hi || !steps) return std::nullopt;
        if (!(*lo < *hi)) {
            fail(field, "lo must be below hi");
            return std::nullopt;
        }
        if (*steps < 2 || *steps != std::floor(*steps) || *steps > 1e7) {
            fail(field + ".steps", "must be an integer >= 2");
            return std::nullopt;
        }
        return Axis{*lo, *hi, static_cast<int>(*steps)};
    }
};

Policy parse_policy(const json& node, const std::string& field) {
    if (node.is_string()) {
        const auto s = node.get<std::string>();
        if (s == "min") return MinRate{};
        if (s == "max") return MaxRate{};
        throw ConfigError(field, "policy must be \"min\", \"max\", {\"constant\": v} or {\"tabulated\": ...}");
    }
    if (node.is_object() && node.contains("constant") && node.at("constant").is_number())
        return ConstantRate{node.at("constant").get<double>()};
    if (node.is_object() && node.contains("tabulated") && node.at("tabulated").is_object()) {
        const auto& tab = node.at("tabulated");
        Reader r;
        auto times = r.numbers(tab, "times", field + ".tabulated");
        auto values = r.numbers(tab, "values", field + ".tabulated");
        if (!r.errors.empty()) throw ConfigError(r.errors);
        return TabulatedRate{*times, *values};
    }
    throw ConfigError(field, "policy must be \"min\", \"max\", {\"constant\": v} or {\"tabulated\": ...}");
}

json policy_to_json(const Policy& p) {
    return std::visit(
        [](const auto& v) -> json {
            using V = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<V, MinRate>)
                return "min";
            else if constexpr (std::is_same_v<V, MaxRate>)
                return "max";
            else if constexpr (std::is_same_v<V, ConstantRate>)
                return json{{"constant", v.level}};
            else
                return json{{"tabulated", {{"times", v.times}, {"values", v.values}}}};
        },
        p);
}

}  // namespace

ConfigError::ConfigError(std::vector<FieldError> fields)
    : std::runtime_error(join(fields)), fields_(std::move(fields)) {}

ConfigError::ConfigError(std::string field, std::string message)
    : ConfigError(std::vector<FieldError>{{std::move(field), std::move(message)}}) {}

Strategy parse_strategy(const json& node, double horizon, const std::string& field) {
    try {
        if (node.is_string()) {
            const auto s = node.get<std::string>();
            if (s == "max") return Strategy::max_only(horizon);
            if (s == "min" || s == "min-only") return Strategy::min_only(horizon);
            throw ConfigError(field, "unknown strategy \"" + s + "\"");
        }
        if (!node.is_object()) throw ConfigError(field, "must be a string or an object");
        if (node.contains("segments")) {
            const auto& segs = node.at("segments");
            if (!segs.is_array() || segs.empty())
                throw ConfigError(field + ".segments", "must be a non-empty array");
            std::vector<StrategySegment> out;
            for (std::size_t i = 0; i < segs.size(); ++i) {
                const std::string f = field + ".segments[" + std::to_string(i) + "]";
                const auto& s = segs[i];
                if (!s.is_object() || !s.contains("end") || !s.at("end").is_number())
                    throw ConfigError(f + ".end", "must be a number");
                if (!s.contains("policy")) throw ConfigError(f + ".policy", "is required");
                out.push_back({s.at("end").get<double>(), parse_policy(s.at("policy"), f + ".policy")});
            }
            return Strategy(std::move(out), horizon);
        }
        if (node.contains("canonical") && node.at("canonical").is_string()) {
            const auto kind = node.at("canonical").get<std::string>();
            Reader r;
            if (kind == "max") return Strategy::max_only(horizon);
            if (kind == "min" || kind == "min-only") return Strategy::min_only(horizon);
            if (kind == "max-min") {
                const auto t0 = r.number(node, "t0", field);
                if (!r.errors.empty()) throw ConfigError(r.errors);
                return Strategy::max_min(*t0, horizon);
            }
            if (kind == "min-max-min" || kind == "min-max") {
                const auto t0 = r.number(node, "t0", field);
                const auto t1 = kind == "min-max" ? std::optional<double>(horizon)
                                                  : r.number(node, "t1", field);
                if (!r.errors.empty()) throw ConfigError(r.errors);
                if (*t0 < 0.0 || *t1 < *t0 || *t1 > horizon)
                    throw ConfigError(field, "need 0 <= t0 <= t1 <= T");
                return Strategy::min_max_min(*t0, *t1, horizon);
            }
            throw ConfigError(field + ".canonical", "unknown canonical strategy \"" + kind + "\"");
        }
        throw ConfigError(field, "needs \"segments\" or \"canonical\"");
    } catch (const InvalidArgument& e) {
        throw ConfigError(field, e.what());
    }
}

json strategy_to_json(const Strategy& strategy) {
    json segs = json::array();
    for (const auto& s : strategy.segments())
        segs.push_back({{"end", s.end}, {"policy", policy_to_json(s.policy)}});
    return {{"label", strategy.label()},
            {"segments", std::move(segs)},
            {"switch_times", strategy.switch_times()}};
}

Config parse_config(const json& doc) {
    if (!doc.is_object()) throw ConfigError("$", "document must be a JSON object");
    Config cfg;
    Reader r;

    bool terms_ok = true;
    if (r.object(doc, "terms")) {
        const auto& t = doc.at("terms");
        const auto rr = r.number(t, "r", "terms");
        const auto beta = r.number(t, "beta", "terms");
        const auto omega = r.number(t, "omega", "terms");
        const char* hkey = t.contains("T") ? "T" : "horizon";
        const auto T = r.number(t, hkey, "terms");
        if (rr && !(*rr > 0.0)) r.fail("terms.r", "must be > 0");
        if (beta && !(*beta > 0.0)) r.fail("terms.beta", "must be > 0");
        if (omega && !(*omega > 0.0 && *omega < 1.0)) r.fail("terms.omega", "must lie in (0, 1)");
        if (T && !(*T > 0.0)) r.fail("terms.T", "must be > 0");
        terms_ok = r.errors.empty();
        if (terms_ok) cfg.terms = LoanTerms(*rr, *beta, *omega, *T);
    } else if (doc.contains("terms")) {
        terms_ok = false;
    }

    const bool has_profile = doc.contains("profile"), has_bounds = doc.contains("bounds");
    if (has_profile && has_bounds) r.fail("bounds", "give either profile or bounds, not both");
    if (has_profile && r.object(doc, "profile")) {
        const auto& p = doc.at("profile");
        const auto income = r.number(p, "income", "profile");
        const auto subsistence = r.number(p, "subsistence", "profile");
        const auto growth = r.number(p, "growth", "profile");
        const auto f_min = r.number(p, "f_min", "profile");
        const auto f_max = r.number(p, "f_max", "profile");
        if (income && subsistence && growth && f_min && f_max) {
            try {
                cfg.bounds = bounds_from_profile({*income, *subsistence, *growth, *f_min, *f_max});
            } catch (const ZeroCapacityError& e) {
                r.fail("profile.income", e.what());
            } catch (const InvalidArgument& e) {
                r.fail("profile", e.what());
            }
        }
    }
    if (has_bounds && !has_profile && r.object(doc, "bounds")) {
        const auto& b = doc.at("bounds");
        auto times = r.numbers(b, "times", "bounds");
        auto lo = r.numbers(b, "min", "bounds");
        auto hi = r.numbers(b, "max", "bounds");
        if (times && lo && hi) {
            try {
                cfg.bounds = PaymentBounds::tabulated({*times, *lo, *hi});
            } catch (const InvalidArgument& e) {
                r.fail("bounds", e.what());
            }
        }
    }
    if (terms_ok && r.errors.empty() && cfg.bounds.coverage() < cfg.terms.horizon())
        r.fail("bounds.times", "must cover [0, T]");

    if (doc.contains("x")) {
        if (const auto x = r.number(doc, "x", "")) cfg.x = *x;
    }
    if (doc.contains("mode")) {
        const auto& m = doc.at("mode");
        const auto parsed = m.is_string() ? parse_mode(m.get<std::string>()) : std::nullopt;
        if (parsed)
            cfg.mode = *parsed;
        else
            r.fail("mode", "must be \"compound\" or \"simple\"");
    }
    if (doc.contains("step")) {
        if (const auto s = r.number(doc, "step", "")) {
            if (*s > 0.0)
                cfg.step = *s;
            else
                r.fail("step", "must be > 0");
        }
    }
    if (doc.contains("grid_n")) {
        if (const auto g = r.number(doc, "grid_n", "")) {
            if (*g >= 2 && *g <= 4096 && *g == std::floor(*g))
                cfg.grid_n = static_cast<int>(*g);
            else
                r.fail("grid_n", "must be an integer in [2, 4096]");
        }
    }
    if (doc.contains("sweep")) {
        const auto& s = doc.at("sweep");
        if (!s.is_object()) {
            r.fail("sweep", "must be an object");
        } else {
            if (s.contains("x")) cfg.sweep_x = r.axis(s.at("x"), "sweep.x");
            if (s.contains("beta")) cfg.sweep_beta = r.axis(s.at("beta"), "sweep.beta");
            if (s.contains("r")) cfg.sweep_r = r.axis(s.at("r"), "sweep.r");
        }
    }

    if (terms_ok) {
        const double T = cfg.terms.horizon();
        try {
            if (doc.contains("strategy") && !doc.at("strategy").is_null())
                cfg.strategy = parse_strategy(doc.at("strategy"), T, "strategy");
            if (doc.contains("strategies")) {
                const auto& list = doc.at("strategies");
                if (!list.is_array()) throw ConfigError("strategies", "must be an array");
                for (std::size_t i = 0; i < list.size(); ++i)
                    cfg.strategies.push_back(
                        parse_strategy(list[i], T, "strategies[" + std::to_string(i) + "]"));
            }
        } catch (const ConfigError& e) {
            for (const auto& f : e.fields()) r.errors.push_back(f);
        }
    }

    if (!r.errors.empty()) throw ConfigError(r.errors);
    return cfg;
}

Config parse_config_text(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError("$", std::string("malformed JSON: ") + e.what());
    }
    return parse_config(doc);
}

Config load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("--config", "cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

json config_to_json(const Config& cfg) {
    const auto& t = cfg.terms;
    json doc{{"terms", {{"r", t.r()}, {"beta", t.beta()}, {"omega", t.omega()}, {"T", t.horizon()}}},
             {"x", cfg.x},
             {"mode", std::string(to_string(cfg.mode))},
             {"step", cfg.step},
             {"grid_n", cfg.grid_n}};
    std::visit(
        [&](const auto& rep) {
            using R = std::decay_t<decltype(rep)>;
            if constexpr (std::is_same_v<R, ExponentialIncome>) {
                doc["profile"] = {{"income", rep.income},   {"subsistence", rep.subsistence},
                                  {"growth", rep.growth},   {"f_min", rep.f_min},
                                  {"f_max", rep.f_max}};
            } else {
                auto times = rep.times;
                if (!times.empty() && std::isinf(times.back()))
                    times.back() = std::max(t.horizon(), times.size() > 1 ? times[times.size() - 2] : 0.0);
                doc["bounds"] = {{"times", times}, {"min", rep.min}, {"max", rep.max}};
            }
        },
        cfg.bounds.representation());
    if (cfg.strategy) doc["strategy"] = strategy_to_json(*cfg.strategy);
    if (!cfg.strategies.empty()) {
        json list = json::array();
        for (const auto& s : cfg.strategies) list.push_back(strategy_to_json(s));
        doc["strategies"] = std::move(list);
    }
    auto axis = [](const Axis& a) { return json{{"lo", a.lo}, {"hi", a.hi}, {"steps", a.steps}}; };
    if (cfg.sweep_x || cfg.sweep_beta || cfg.sweep_r) {
        json sweep = json::object();
        if (cfg.sweep_x) sweep["x"] = axis(*cfg.sweep_x);
        if (cfg.sweep_beta) sweep["beta"] = axis(*cfg.sweep_beta);
        if (cfg.sweep_r) sweep["r"] = axis(*cfg.sweep_r);
        doc["sweep"] = std::move(sweep);
    }
    return doc;
}

}  // namespace loancost::app
