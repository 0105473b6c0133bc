#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "loancost/app/config.hpp"

namespace loancost::app {

/// {"decimal": "%.6f", "raw": v}
[[nodiscard]] nlohmann::json currency(double value);

/// Pretty-printed JSON with a trailing newline; the exact bytes the CLI and service emit.
[[nodiscard]] std::string render_json(const nlohmann::json& doc);

/// Optimal (or overridden) strategy and its valuation.
/// Throws DomainError when a forced max-only strategy cannot repay the loan.
[[nodiscard]] nlohmann::json valuation_json(const Config& config);
[[nodiscard]] std::string valuation_text(const nlohmann::json& valuation);
[[nodiscard]] std::string valuation_csv(const nlohmann::json& valuation);

[[nodiscard]] nlohmann::json trajectory_json(const Config& config);

/// Costs of config.strategies, or of max, min-only, max-min at t_c and the optimum.
[[nodiscard]] nlohmann::json compare_json(const Config& config);

struct FrontierRow {
    double x;
    double cost;
    double cost_over_x;
    std::string strategy;
    double tau;
};

[[nodiscard]] Axis default_frontier_axis(const Config& config);
[[nodiscard]] std::vector<FrontierRow> frontier(const Config& config, const Axis& axis);
[[nodiscard]] nlohmann::json frontier_json(const Config& config, const Axis& axis,
                                           const std::vector<FrontierRow>& rows);
[[nodiscard]] std::string frontier_csv(const Config& config, const std::vector<FrontierRow>& rows);

struct ContourRow {
    double beta;
    double r;
    double x_star;
    double t_c;
    double t_star;
};

[[nodiscard]] Axis default_beta_axis();
[[nodiscard]] Axis default_r_axis();
/// beta-major grid of critical balances.
[[nodiscard]] std::vector<ContourRow> contour(const Config& config, const Axis& beta,
                                              const Axis& r);
[[nodiscard]] nlohmann::json contour_json(const Config& config, const std::vector<ContourRow>& rows);
[[nodiscard]] std::string contour_csv(const Config& config, const std::vector<ContourRow>& rows);

/// Upper estimate of cost evaluations a frontier sweep performs.
[[nodiscard]] double frontier_evaluations(const Config& config, const Axis& axis);

}  // namespace loancost::app
