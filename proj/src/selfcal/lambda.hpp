#pragma once

#include <string>

namespace wsod::selfcal {

// The paper prescribes the blend weight twice: a (n/N)^0.5 schedule inside the
// training algorithm and a fixed 0.6 picked by sweep in the implementation
// details. All three readings are selectable; "fixed 0.6" is the default.
struct LambdaPolicy {
    enum class Mode { scheduled, fixed, scheduled_capped };
    Mode mode = Mode::fixed;
    double fixed_value = 0.6;
    double exponent = 0.5;
    double cap = 0.6;

    std::string describe() const;
    static LambdaPolicy parse(const std::string& spec);  // "fixed:0.6" | "scheduled" | "capped:0.6"
};

// n is the 1-based epoch, N the maximum epoch; result is always in [0,1].
double lambda_at(int n, int max_epochs, const LambdaPolicy& policy);

}  // namespace wsod::selfcal
