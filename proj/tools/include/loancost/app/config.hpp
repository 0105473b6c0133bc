#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "loancost/model.hpp"

namespace loancost::app {

inline constexpr const char* kVersion = "0.1.0";

struct FieldError {
    std::string field;
    std::string message;
};

/// Request or config document that fails schema validation.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(std::vector<FieldError> fields);
    ConfigError(std::string field, std::string message);

    [[nodiscard]] const std::vector<FieldError>& fields() const noexcept { return fields_; }

private:
    std::vector<FieldError> fields_;
};

struct Axis {
    double lo;
    double hi;
    int steps;

    [[nodiscard]] double at(int i) const { return lo + (hi - lo) * i / (steps - 1); }
};

/// One scenario: terms, bounds, balance, mode and optional overrides.
struct Config {
    LoanTerms terms{0.03, 0.04, 0.4, 25.0};
    PaymentBounds bounds = PaymentBounds::exponential_income({82.0, 32.0, 0.04, 0.10, 0.30});
    double x = 100.0;
    InterestMode mode = InterestMode::Compound;
    std::optional<Strategy> strategy;
    std::vector<Strategy> strategies;  ///< for comparisons
    double step = 0.25;                ///< trajectory sampling step (years)
    int grid_n = 96;
    std::optional<Axis> sweep_x;
    std::optional<Axis> sweep_beta;
    std::optional<Axis> sweep_r;
};

/// Parses a config or request document. Missing sections keep their defaults.
/// Throws ConfigError listing every offending field.
[[nodiscard]] Config parse_config(const nlohmann::json& doc);
[[nodiscard]] Config parse_config_text(const std::string& text);
[[nodiscard]] Config load_config(const std::string& path);

/// Strategy from "max", "min", {"canonical": ..., "t0", "t1"} or {"segments": [...]}.
[[nodiscard]] Strategy parse_strategy(const nlohmann::json& node, double horizon,
                                      const std::string& field);

[[nodiscard]] nlohmann::json strategy_to_json(const Strategy& strategy);
[[nodiscard]] nlohmann::json config_to_json(const Config& config);

}  // namespace loancost::app
