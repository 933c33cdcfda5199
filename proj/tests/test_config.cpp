#include "oracles.hpp"

#include "preytaxis/config.hpp"
#include "preytaxis/error.hpp"

#include <doctest.h>

#include <filesystem>
#include <string>

using namespace preytaxis;

namespace {

const char* kMinimal = R"(# minimal scenario
[scenario]
name = demo

[parameters]
d1 = 0.1
d2 = 2
d3 = 0.1
alpha1 = 0.5
alpha2 = 2
alpha3 = 1
beta1 = 0.5
beta2 = 0.5
beta31 = 0.1
beta32 = 0.1
xi = 0.5
chi = 8
L = 7

[sensitivity]
c = 1
a = 0.1
)";

ErrorCode code_of(const std::string& text) {
    try {
        parse_config(text);
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an error");
    return ErrorCode::ConfigError;
}

}  // namespace

TEST_CASE("minimal scenario parses with defaults") {
    const RunConfig c = parse_config(kMinimal);
    CHECK(c.scenario == "demo");
    CHECK(c.parameters.d2 == 2.0);
    CHECK(c.parameters.L == 7.0);
    CHECK(c.sensitivity(0.05) == doctest::Approx(0.05 * 0.05));
    CHECK(c.grid_n == 256);
    CHECK(c.solver.cfl_factor == SolverConfig{}.cfl_factor);
    CHECK(c.initial.convention == CosineConvention::Literal);
}

TEST_CASE("solver, analysis and coefficient overrides") {
    std::string text = kMinimal;
    text.replace(text.find("c = 1\na = 0.1\n"), 14, "coefficients = 0, 0.1, -1\n");
    text += "[solver]\nn = 64\nt_end = 12.5\nprobe_x = 0, 3.5\nstop_when_steady = false\n"
            "initial_convention = scaled\ninitial_mode = 7\n"
            "[analysis]\npurity_threshold = 0.7\nthreshold_kmax = 9\n";
    const RunConfig c = parse_config(text);
    CHECK(c.grid_n == 64);
    CHECK(c.solver.t_end == 12.5);
    REQUIRE(c.solver.probe_x.size() == 2);
    CHECK(c.solver.probe_x[1] == 3.5);
    CHECK_FALSE(c.solver.stop_when_steady);
    CHECK(c.initial.convention == CosineConvention::Scaled);
    CHECK(c.initial.mode == 7);
    CHECK(c.analysis.purity_threshold == 0.7);
    CHECK(c.threshold_kmax == 9);
    CHECK(c.sensitivity(0.05) == doctest::Approx(0.05 * 0.05));
}

TEST_CASE("malformed files are rejected") {
    const std::string base = kMinimal;
    CHECK(code_of(base + "[bogus]\n") == ErrorCode::ConfigError);
    CHECK(code_of(base + "[solver]\nsteps = 3\n") == ErrorCode::ConfigError);
    CHECK(code_of(base + "[solver]\nt_end = ten\n") == ErrorCode::ConfigError);
    CHECK(code_of(base + "[solver]\nn = 8\n") == ErrorCode::ConfigError);
    CHECK(code_of(base + "[parameters]\nchi = 9\n") == ErrorCode::ConfigError);
    CHECK(code_of("d1 = 1\n") == ErrorCode::ConfigError);
    std::string no_sens = base.substr(0, base.find("[sensitivity]"));
    CHECK(code_of(no_sens) == ErrorCode::ConfigError);
    std::string negative = base;
    negative.replace(negative.find("d1 = 0.1"), 8, "d1 = -1");
    CHECK(code_of(negative) == ErrorCode::NonPositiveParameter);
}

TEST_CASE("every shipped scenario parses") {
    const std::filesystem::path dir = std::filesystem::path(oracle::config_path("")).parent_path();
    int count = 0;
    for (const auto& entry : std::filesystem::recursive_directory_iterator(dir)) {
        if (entry.path().extension() != ".cfg") continue;
        CAPTURE(entry.path().string());
        const RunConfig c = load_config(entry.path().string());
        CHECK_FALSE(c.scenario.empty());
        ++count;
    }
    CHECK(count >= 10);
    CHECK_THROWS_AS(load_config((dir / "missing.cfg").string()), Error);
}

TEST_CASE("the shipped oscillatory scenario is the calibrated rate set") {
    const RunConfig c = load_config(oracle::config_path("table3.cfg"));
    const Parameters ref = oracle::table3_params();
    CHECK(c.parameters.d2 == ref.d2);
    CHECK(c.parameters.xi == ref.xi);
    CHECK(c.parameters.alpha3 == ref.alpha3);
    CHECK(c.sensitivity(0.3) == doctest::Approx(oracle::table3_sensitivity()(0.3)));
}
