#pragma once

#include "preytaxis/analysis.hpp"
#include "preytaxis/model.hpp"
#include "preytaxis/solver.hpp"

#include <string>
#include <string_view>

namespace preytaxis {

struct InitialData {
    double amplitude = 0.01;
    int mode = 1;
    CosineConvention convention = CosineConvention::Literal;
};

/// Everything a scenario file can set.
struct RunConfig {
    std::string scenario;
    Parameters parameters;
    Sensitivity sensitivity;
    SolverConfig solver;
    InitialData initial;
    AnalysisConfig analysis;
    int grid_n = 256;
    int threshold_kmax = 0;  // <= 0: tail rule
};

/// Parses the sectioned key = value format:
///
///   # comment
///   [parameters]
///   d1 = 0.1
///   [sensitivity]
///   c = 1
///   a = 0.1
///
/// Sections: scenario, parameters, sensitivity, solver, analysis. Unknown
/// sections or keys, duplicates and malformed numbers throw ConfigError;
/// parameter validation errors propagate.
RunConfig parse_config(std::string_view text, std::string_view source = "<config>");

/// Reads and parses `path`; an unreadable file is a ConfigError.
RunConfig load_config(const std::string& path);

}  // namespace preytaxis
