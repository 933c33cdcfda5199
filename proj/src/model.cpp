#include "preytaxis/model.hpp"

#include "preytaxis/error.hpp"

#include <cmath>
#include <utility>

namespace preytaxis {

std::string_view to_string(ErrorCode code) {
    switch (code) {
    case ErrorCode::NonPositiveParameter: return "NonPositiveParameter";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::ZeroMode: return "ZeroMode";
    case ErrorCode::KmaxTooLarge: return "KmaxTooLarge";
    case ErrorCode::NoPositiveEquilibrium: return "NoPositiveEquilibrium";
    case ErrorCode::SensitivityVanishesAtEquilibrium: return "SensitivityVanishesAtEquilibrium";
    case ErrorCode::NotGroupDefense: return "NotGroupDefense";
    case ErrorCode::NotAHopfPoint: return "NotAHopfPoint";
    case ErrorCode::SingularSystem: return "SingularSystem";
    case ErrorCode::DegenerateBranch: return "DegenerateBranch";
    case ErrorCode::InsufficientPeaks: return "InsufficientPeaks";
    case ErrorCode::NoOscillation: return "NoOscillation";
    case ErrorCode::NonFiniteState: return "NonFiniteState";
    case ErrorCode::BlowupGuard: return "BlowupGuard";
    case ErrorCode::StepSizeUnderflow: return "StepSizeUnderflow";
    case ErrorCode::AmplitudeTooLarge: return "AmplitudeTooLarge";
    }
    return "UnknownError";
}

int exit_code_for(ErrorCode code) {
    switch (code) {
    case ErrorCode::NonPositiveParameter:
    case ErrorCode::ConfigError:
    case ErrorCode::ZeroMode:
    case ErrorCode::KmaxTooLarge:
        return 2;
    case ErrorCode::NonFiniteState:
    case ErrorCode::BlowupGuard:
    case ErrorCode::StepSizeUnderflow:
    case ErrorCode::AmplitudeTooLarge:
        return 4;
    default:
        return 3;
    }
}

Parameters validate_parameters(const Parameters& raw) {
    const std::pair<const char*, double> positive[] = {
        {"d1", raw.d1},         {"d2", raw.d2},         {"d3", raw.d3},
        {"alpha1", raw.alpha1}, {"alpha2", raw.alpha2}, {"alpha3", raw.alpha3},
        {"beta1", raw.beta1},   {"beta2", raw.beta2},   {"beta31", raw.beta31},
        {"beta32", raw.beta32}, {"L", raw.L},
    };
    for (const auto& [name, value] : positive) {
        if (!(value > 0.0) || !std::isfinite(value))
            throw Error(ErrorCode::NonPositiveParameter, name);
    }
    if (!std::isfinite(raw.chi)) throw Error(ErrorCode::NonPositiveParameter, "chi is not finite");
    if (!std::isfinite(raw.xi)) throw Error(ErrorCode::NonPositiveParameter, "xi is not finite");
    return raw;
}

Sensitivity::Sensitivity(std::vector<double> coefficients) {
    if (coefficients.size() > c_.size())
        throw Error(ErrorCode::ConfigError, "sensitivity polynomial degree exceeds 4");
    for (std::size_t i = 0; i < coefficients.size(); ++i) {
        if (!std::isfinite(coefficients[i]))
            throw Error(ErrorCode::ConfigError, "non-finite sensitivity coefficient");
        c_[i] = coefficients[i];
    }
}

Sensitivity Sensitivity::product_form(double c, double a) { return Sensitivity{0.0, c * a, -c}; }

Sensitivity::Values Sensitivity::eval(double w) const {
    // Horner for the polynomial and its first two derivatives.
    double p = 0.0, dp = 0.0, ddp = 0.0;
    for (std::size_t i = c_.size(); i-- > 0;) {
        ddp = ddp * w + 2.0 * dp;
        dp = dp * w + p;
        p = p * w + c_[i];
    }
    return {p, dp, ddp};
}

Equilibrium equilibrium(const Parameters& p) {
    if (!p.coexistence())
        throw Error(ErrorCode::NoPositiveEquilibrium, "alpha3 <= beta31 + beta32");
    const double w = (p.alpha3 - p.beta31 - p.beta32) /
                     (p.alpha3 + p.beta1 * p.beta31 / p.alpha1 + p.beta2 * p.beta32 / p.alpha2);
    return {1.0 + p.beta1 / p.alpha1 * w, 1.0 + p.beta2 / p.alpha2 * w, w};
}

Rates kinetics(const Parameters& p, double u, double v, double w) {
    return {
        p.alpha1 * (1.0 - u) * u + p.beta1 * u * w,
        p.alpha2 * (1.0 - v) * v + p.beta2 * v * w,
        p.alpha3 * (1.0 - w) * w - p.beta31 * u * w - p.beta32 * v * w,
    };
}

}  // namespace preytaxis
