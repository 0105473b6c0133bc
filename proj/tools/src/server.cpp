#include "loancost/app/server.hpp"

#include <pthread.h>

#include <atomic>
#include <csignal>
#include <cstdlib>
#include <thread>

#include <httplib.h>

#include "loancost/app/config.hpp"
#include "loancost/app/report.hpp"
#include "loancost/errors.hpp"

namespace loancost::app {

using nlohmann::json;

namespace {

json error_body(const std::string& code, const std::string& message) {
    return {{"error", code}, {"message", message}};
}

template <class F>
ServiceResponse guarded(F&& f) {
    try {
        return {200, render_json(f())};
    } catch (const ConfigError& e) {
        json body = error_body("invalid_request", e.what());
        json fields = json::array();
        for (const auto& fe : e.fields()) fields.push_back({{"field", fe.field}, {"message", fe.message}});
        body["fields"] = std::move(fields);
        return {400, render_json(body)};
    } catch (const ResourceLimitError& e) {
        return {429, render_json(error_body("too_much_work", e.what()))};
    } catch (const AdmissibilityError& e) {
        return {422, render_json(error_body("inadmissible_strategy", e.what()))};
    } catch (const DomainError& e) {
        return {422, render_json(error_body("out_of_domain", e.what()))};
    } catch (const InvalidArgument& e) {
        return {400, render_json(error_body("invalid_request", e.what()))};
    } catch (const std::exception& e) {
        return {500, render_json(error_body("internal", e.what()))};
    }
}

// Query parameters become a config document so both paths share validation.
json query_to_doc(const std::multimap<std::string, std::string>& query) {
    auto get = [&](const char* key) -> std::optional<std::string> {
        const auto it = query.find(key);
        if (it == query.end()) return std::nullopt;
        return it->second;
    };
    std::vector<FieldError> errors;
    auto number = [&](const char* key) -> std::optional<double> {
        const auto s = get(key);
        if (!s) return std::nullopt;
        char* end = nullptr;
        const double v = std::strtod(s->c_str(), &end);
        if (s->empty() || *end != '\0' || !std::isfinite(v)) {
            errors.push_back({key, "must be a finite number"});
            return std::nullopt;
        }
        return v;
    };
    json doc = json::object();
    json terms = json::object();
    for (const char* k : {"r", "beta", "omega", "T"})
        if (auto v = number(k)) terms[k] = *v;
    if (!terms.empty()) {
        // partial terms fall back to defaults field by field
        json full{{"r", 0.03}, {"beta", 0.04}, {"omega", 0.4}, {"T", 25.0}};
        full.update(terms);
        doc["terms"] = full;
    }
    json profile = json::object();
    for (const char* k : {"income", "subsistence", "growth", "f_min", "f_max"})
        if (auto v = number(k)) profile[k] = *v;
    if (!profile.empty()) {
        json full{{"income", 82.0}, {"subsistence", 32.0}, {"growth", 0.04}, {"f_min", 0.1}, {"f_max", 0.3}};
        full.update(profile);
        doc["profile"] = full;
    }
    if (auto m = get("mode")) doc["mode"] = *m;
    if (auto g = number("grid_n")) doc["grid_n"] = *g;
    // a partial x axis is completed from the default axis once the config is known
    json axis = json::object();
    if (auto v = number("x_lo")) axis["lo"] = *v;
    if (auto v = number("x_hi")) axis["hi"] = *v;
    if (auto v = number("steps")) axis["steps"] = *v;
    if (!axis.empty()) doc["sweep"] = {{"x", axis}};
    if (!errors.empty()) throw ConfigError(errors);
    return doc;
}

json frontier_response(const std::multimap<std::string, std::string>& query) {
    json doc = query_to_doc(query);
    json axis = doc.contains("sweep") ? doc["sweep"]["x"] : json::object();
    doc.erase("sweep");
    const Config base = parse_config(doc);
    const Axis fallback = default_frontier_axis(base);
    if (!axis.empty()) {
        json full{{"lo", fallback.lo}, {"hi", fallback.hi}, {"steps", fallback.steps}};
        full.update(axis);
        doc["sweep"] = {{"x", full}};
    }
    const Config cfg = parse_config(doc);
    const Axis a = cfg.sweep_x ? *cfg.sweep_x : fallback;
    const double work = frontier_evaluations(cfg, a);
    if (work > kMaxSweepEvaluations)
        throw ResourceLimitError("sweep needs about " + std::to_string(static_cast<long long>(work)) +
                                 " evaluations; the limit is 1000000");
    return frontier_json(cfg, a, frontier(cfg, a));
}

}  // namespace

ServiceResponse handle_request(const std::string& method, const std::string& path,
                               const std::string& body,
                               const std::multimap<std::string, std::string>& query) {
    if (method == "GET" && path == "/v1/health")
        return {200, render_json({{"status", "ok"}, {"version", kVersion}})};
    if (method == "GET" && path == "/v1/frontier")
        return guarded([&] { return frontier_response(query); });
    if (method == "POST" && path == "/v1/valuation")
        return guarded([&] { return valuation_json(parse_config_text(body)); });
    if (method == "POST" && path == "/v1/trajectory")
        return guarded([&] {
            const Config cfg = parse_config_text(body);
            if (cfg.terms.horizon() / cfg.step > 1e5)
                throw ResourceLimitError("trajectory sampling step too small");
            return trajectory_json(cfg);
        });
    if (method == "POST" && path == "/v1/compare")
        return guarded([&] {
            const Config cfg = parse_config_text(body);
            if (cfg.strategies.size() > 64) throw ResourceLimitError("at most 64 strategies per comparison");
            return compare_json(cfg);
        });
    return {404, render_json(error_body("not_found", method + " " + path))};
}

void install_routes(httplib::Server& server, const ServerOptions& options) {
    server.set_default_headers({{"Access-Control-Allow-Origin", options.cors_origin},
                                {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"},
                                {"Access-Control-Allow-Headers", "Content-Type"}});
    auto forward = [](const httplib::Request& req, httplib::Response& res) {
        std::multimap<std::string, std::string> query(req.params.begin(), req.params.end());
        const auto out = handle_request(req.method, req.path, req.body, query);
        res.status = out.status;
        res.set_content(out.body, "application/json");
    };
    for (const char* p : {"/v1/valuation", "/v1/trajectory", "/v1/compare"}) server.Post(p, forward);
    for (const char* p : {"/v1/health", "/v1/frontier"}) server.Get(p, forward);
    server.Options(R"(/v1/.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });
    if (!options.static_dir.empty() && !server.set_mount_point("/", options.static_dir))
        throw InvalidArgument("static directory not found: " + options.static_dir);
}

int run_server(const ServerOptions& options, std::ostream& log) {
    sigset_t stop_signals;
    sigemptyset(&stop_signals);
    sigaddset(&stop_signals, SIGINT);
    sigaddset(&stop_signals, SIGTERM);
    sigset_t previous;
    pthread_sigmask(SIG_BLOCK, &stop_signals, &previous);  // inherited by the worker threads

    httplib::Server server;
    install_routes(server, options);
    int port = options.port;
    if (port == 0) {
        port = server.bind_to_any_port(options.bind);
    } else if (!server.bind_to_port(options.bind, port)) {
        port = -1;
    }
    if (port < 0) {
        pthread_sigmask(SIG_SETMASK, &previous, nullptr);
        log << "error: cannot bind " << options.bind << ":" << options.port << "\n";
        return 1;
    }
    log << "loancost " << kVersion << " listening on http://" << options.bind << ":" << port << "\n"
        << std::flush;

    std::atomic<bool> done{false};
    std::thread watcher([&] {
        const timespec tick{0, 100'000'000};
        while (!done.load()) {
            if (sigtimedwait(&stop_signals, nullptr, &tick) > 0) {
                server.stop();
                return;
            }
        }
    });
    const bool ok = server.listen_after_bind();
    done.store(true);
    watcher.join();
    pthread_sigmask(SIG_SETMASK, &previous, nullptr);
    log << "loancost server stopped\n";
    return ok ? 0 : 1;
}

}  // namespace loancost::app
