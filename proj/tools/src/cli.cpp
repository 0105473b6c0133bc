#include "loancost/app/cli.hpp"

#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>

#include "loancost/app/config.hpp"
#include "loancost/app/report.hpp"
#include "loancost/app/server.hpp"
#include "loancost/app/verify.hpp"
#include "loancost/errors.hpp"

namespace loancost::app {

using nlohmann::json;

namespace {

/// Input or output file that cannot be read or written.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Common {
    std::string config;
    std::string mode;
    std::string out;
    std::string format;
    std::optional<double> x, r, beta, omega, horizon;
    std::optional<int> grid_n;
};

void add_common(CLI::App* cmd, Common& c, const std::string& default_format) {
    cmd->add_option("--config", c.config, "JSON config file");
    cmd->add_option("--mode", c.mode, "compound or simple")->check(CLI::IsMember({"compound", "simple"}));
    cmd->add_option("--out", c.out, "write output to this file instead of stdout");
    c.format = default_format;
    cmd->add_option("--format", c.format, "output format")
        ->check(CLI::IsMember({"csv", "json", "text"}));
    cmd->add_option("--x", c.x, "initial balance (thousands)");
    cmd->add_option("--r", c.r, "discount rate");
    cmd->add_option("--beta", c.beta, "loan-rate spread over r");
    cmd->add_option("--omega", c.omega, "tax rate on the forgiven balance");
    cmd->add_option("--horizon", c.horizon, "forgiveness horizon T (years)");
    cmd->add_option("--grid-n", c.grid_n, "switch-time grid for the simple-interest search");
}

json read_doc(const std::string& path) {
    if (path.empty()) return json::object();
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return json::parse(buf.str());
    } catch (const json::parse_error& e) {
        throw ConfigError("--config", std::string("malformed JSON: ") + e.what());
    }
}

// Flags override the document field by field before the shared validation runs.
Config resolve(const Common& c, json doc, const std::function<void(json&)>& extra = {}) {
    if (!doc.is_object()) throw ConfigError("$", "document must be a JSON object");
    if (!c.mode.empty()) doc["mode"] = c.mode;
    if (c.x) doc["x"] = *c.x;
    if (c.grid_n) doc["grid_n"] = *c.grid_n;
    if (c.r || c.beta || c.omega || c.horizon) {
        json terms{{"r", 0.03}, {"beta", 0.04}, {"omega", 0.4}, {"T", 25.0}};
        if (doc.contains("terms") && doc["terms"].is_object()) terms.update(doc["terms"]);
        if (c.r) terms["r"] = *c.r;
        if (c.beta) terms["beta"] = *c.beta;
        if (c.omega) terms["omega"] = *c.omega;
        if (c.horizon) {
            terms.erase("horizon");
            terms["T"] = *c.horizon;
        }
        doc["terms"] = terms;
    }
    if (extra) extra(doc);
    return parse_config(doc);
}

// Missing axis fields come from the config document first, then from `fallback`.
void set_axis(json& doc, const char* name, std::optional<double> lo, std::optional<double> hi,
              std::optional<int> steps, const Axis& fallback) {
    if (!lo && !hi && !steps) return;
    json axis{{"lo", fallback.lo}, {"hi", fallback.hi}, {"steps", fallback.steps}};
    if (doc.contains("sweep") && doc["sweep"].is_object() && doc["sweep"].contains(name) &&
        doc["sweep"][name].is_object())
        axis.update(doc["sweep"][name]);
    if (lo) axis["lo"] = *lo;
    if (hi) axis["hi"] = *hi;
    if (steps) axis["steps"] = *steps;
    doc["sweep"][name] = axis;
}

bool emit(const Common& c, const std::string& text, std::ostream& out, std::ostream& err) {
    if (c.out.empty()) {
        out << text;
        return true;
    }
    std::ofstream file(c.out, std::ios::binary);
    file << text;
    if (!file) {
        err << "error: cannot write " << c.out << "\n";
        return false;
    }
    return true;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Repayment-cost optimizer for income-driven student loans", "loancost"};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1);

    Common value_opts, frontier_opts, contour_opts;
    auto* value = app.add_subcommand("value", "optimal strategy and cost for one scenario");
    add_common(value, value_opts, "text");

    auto* front = app.add_subcommand("frontier", "cost-to-balance sweep over x");
    add_common(front, frontier_opts, "csv");
    std::optional<double> x_lo, x_hi;
    std::optional<int> x_steps;
    front->add_option("--x-lo", x_lo);
    front->add_option("--x-hi", x_hi);
    front->add_option("--steps", x_steps);

    auto* cont = app.add_subcommand("contour", "critical balance x* over a (beta, r) grid");
    add_common(cont, contour_opts, "csv");
    std::optional<double> b_lo, b_hi, r_lo, r_hi;
    std::optional<int> b_steps, r_steps;
    cont->add_option("--beta-lo", b_lo);
    cont->add_option("--beta-hi", b_hi);
    cont->add_option("--beta-steps", b_steps);
    cont->add_option("--r-lo", r_lo);
    cont->add_option("--r-hi", r_hi);
    cont->add_option("--r-steps", r_steps);

    auto* verify = app.add_subcommand("verify", "run invariant and oracle suites");
    std::string suite = "all";
    std::string verify_out;
    std::vector<std::string> choices{"all"};
    for (const auto& s : verify_suites()) choices.push_back(s);
    verify->add_option("suite", suite, "suite name")->check(CLI::IsMember(choices));
    verify->add_option("--out", verify_out, "write the report to this file");

    auto* serve = app.add_subcommand("serve", "JSON service on /v1");
    ServerOptions server_opts;
    serve->add_option("--port", server_opts.port, "0 picks a free port");
    serve->add_option("--bind", server_opts.bind);
    serve->add_option("--static", server_opts.static_dir, "directory served at /");
    serve->add_option("--cors-origin", server_opts.cors_origin);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? 0 : 2;
    }

    try {
        if (*value) {
            const Config cfg = resolve(value_opts, read_doc(value_opts.config));
            const json v = valuation_json(cfg);
            const std::string& f = value_opts.format;
            const std::string text = f == "json" ? render_json(v) : f == "csv" ? valuation_csv(v) : valuation_text(v);
            return emit(value_opts, text, out, err) ? 0 : 4;
        }
        if (*front) {
            const json doc = read_doc(frontier_opts.config);
            const Axis fallback = default_frontier_axis(resolve(frontier_opts, doc));
            const Config cfg = resolve(frontier_opts, doc, [&](json& d) {
                set_axis(d, "x", x_lo, x_hi, x_steps, fallback);
            });
            const Axis axis = cfg.sweep_x ? *cfg.sweep_x : default_frontier_axis(cfg);
            const auto rows = frontier(cfg, axis);
            const std::string text = frontier_opts.format == "json" ? render_json(frontier_json(cfg, axis, rows))
                                                                    : frontier_csv(cfg, rows);
            return emit(frontier_opts, text, out, err) ? 0 : 4;
        }
        if (*cont) {
            const Config cfg = resolve(contour_opts, read_doc(contour_opts.config), [&](json& d) {
                set_axis(d, "beta", b_lo, b_hi, b_steps, default_beta_axis());
                set_axis(d, "r", r_lo, r_hi, r_steps, default_r_axis());
            });
            const auto rows = contour(cfg, cfg.sweep_beta ? *cfg.sweep_beta : default_beta_axis(),
                                      cfg.sweep_r ? *cfg.sweep_r : default_r_axis());
            const std::string text = contour_opts.format == "json" ? render_json(contour_json(cfg, rows))
                                                                   : contour_csv(cfg, rows);
            return emit(contour_opts, text, out, err) ? 0 : 4;
        }
        if (*verify) {
            std::ostringstream report;
            const bool ok = run_verify(suite, report);
            Common sink;
            sink.out = verify_out;
            if (!emit(sink, report.str(), out, err)) return 4;
            return ok ? 0 : 1;
        }
        if (*serve) return run_server(server_opts, err);
    } catch (const IoError& e) {
        err << "error: " << e.what() << "\n";
        return 4;
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const InvalidArgument& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        err << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}

}  // namespace loancost::app
