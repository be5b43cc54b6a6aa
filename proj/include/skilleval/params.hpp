#pragma once

#include <optional>
#include <stdexcept>

namespace skilleval {

// Scoring calibration parameters. Score-unit fields live on a 0..100 scale.
struct ScoringParams {
    double eta = 50.0;      // neutral efficiency point
    double alpha = 25.0;    // efficiency sensitivity per cost doubling
    double beta = 20.0;     // minimum both-succeed credit
    double theta_s = 80.0;  // security caution threshold
    double epsilon = 1.0;   // cost-ratio smoothing constant

    bool operator==(const ScoringParams&) const = default;
};

// Partial override set, e.g. from a manifest or command-line flags.
struct ParamOverrides {
    std::optional<double> eta;
    std::optional<double> alpha;
    std::optional<double> beta;
    std::optional<double> theta_s;
    std::optional<double> epsilon;

    bool empty() const {
        return !eta && !alpha && !beta && !theta_s && !epsilon;
    }

    bool operator==(const ParamOverrides&) const = default;
};

// Throws std::domain_error when the combined setting is out of range.
// Constraints: 0 <= beta <= eta <= 100, alpha > 0, 0 < theta_s < 100, epsilon > 0.
void validate_params(const ScoringParams& p);

// Applies overrides on top of a base setting and validates the result.
ScoringParams apply_overrides(const ScoringParams& base, const ParamOverrides& ov);

}  // namespace skilleval
