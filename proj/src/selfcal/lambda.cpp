#include "selfcal/lambda.hpp"

#include <cmath>

#include "core/errors.hpp"

namespace wsod::selfcal {

std::string LambdaPolicy::describe() const {
    switch (mode) {
        case Mode::scheduled: return "scheduled:" + std::to_string(exponent);
        case Mode::fixed: return "fixed:" + std::to_string(fixed_value);
        default: return "capped:" + std::to_string(cap);
    }
}

LambdaPolicy LambdaPolicy::parse(const std::string& spec) {
    LambdaPolicy p;
    std::string mode = spec;
    std::string value;
    size_t colon = spec.find(':');
    if (colon != std::string::npos) {
        mode = spec.substr(0, colon);
        value = spec.substr(colon + 1);
    }
    auto parse_value = [&](double fallback) {
        if (value.empty()) return fallback;
        try {
            return std::stod(value);
        } catch (...) {
            fail_config("lambda: bad value in '" + spec + "'");
        }
    };
    if (mode == "fixed") {
        p.mode = Mode::fixed;
        p.fixed_value = parse_value(0.6);
        require_config(p.fixed_value >= 0.0 && p.fixed_value <= 1.0,
                       "lambda: fixed value must be in [0,1]");
    } else if (mode == "scheduled") {
        p.mode = Mode::scheduled;
        p.exponent = parse_value(0.5);
        require_config(p.exponent > 0.0, "lambda: exponent must be positive");
    } else if (mode == "capped" || mode == "scheduled_capped") {
        p.mode = Mode::scheduled_capped;
        p.cap = parse_value(0.6);
        require_config(p.cap >= 0.0 && p.cap <= 1.0, "lambda: cap must be in [0,1]");
    } else {
        fail_config("lambda: unknown mode '" + mode + "' (use fixed[:V] | scheduled[:E] | capped[:V])");
    }
    return p;
}

double lambda_at(int n, int max_epochs, const LambdaPolicy& policy) {
    require_config(max_epochs >= 1, "lambda_at: max_epochs must be >= 1");
    require_config(n >= 1 && n <= max_epochs, "lambda_at: epoch out of range");
    switch (policy.mode) {
        case LambdaPolicy::Mode::fixed:
            return policy.fixed_value;
        case LambdaPolicy::Mode::scheduled:
            return std::pow(static_cast<double>(n) / max_epochs, policy.exponent);
        default:
            return std::min(std::pow(static_cast<double>(n) / max_epochs, policy.exponent),
                            policy.cap);
    }
}

}  // namespace wsod::selfcal
