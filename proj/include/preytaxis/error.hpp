#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace preytaxis {

enum class ErrorCode {
    // configuration / usage
    NonPositiveParameter,
    ConfigError,
    ZeroMode,
    KmaxTooLarge,
    // mathematical domain
    NoPositiveEquilibrium,
    SensitivityVanishesAtEquilibrium,
    NotGroupDefense,
    NotAHopfPoint,
    SingularSystem,
    DegenerateBranch,
    InsufficientPeaks,
    NoOscillation,
    // runtime guards
    NonFiniteState,
    BlowupGuard,
    StepSizeUnderflow,
    AmplitudeTooLarge,
};

std::string_view to_string(ErrorCode code);

/// Process exit code class of an error: 2 usage/config, 3 math-domain, 4 runtime guard.
int exit_code_for(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& detail)
        : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace preytaxis
