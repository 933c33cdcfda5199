#include "oracles.hpp"

#include "preytaxis/error.hpp"
#include "preytaxis/solver.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <cstring>

using namespace preytaxis;

namespace {

StateField uniform(const Grid& g, double u, double v, double w) {
    StateField s;
    s.u.assign(g.n(), u);
    s.v.assign(g.n(), v);
    s.w.assign(g.n(), w);
    return s;
}

double max_abs(const std::vector<double>& a) {
    double m = 0.0;
    for (double x : a) m = std::max(m, std::abs(x));
    return m;
}

/// Fine-to-coarse restriction by pairwise averaging (cell-centered grids nest).
std::vector<double> restrict_half(const std::vector<double>& fine) {
    std::vector<double> c(fine.size() / 2);
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = 0.5 * (fine[2 * i] + fine[2 * i + 1]);
    return c;
}

double diff_l2(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(s / static_cast<double>(a.size()));
}

StateField run_to(const Parameters& p, const Sensitivity& s, int n, double t_end) {
    const Grid g(p.L, n);
    SolverConfig cfg;
    cfg.t_end = t_end;
    cfg.cfl_factor = 0.5;
    cfg.snapshot_interval = 0.0;
    cfg.stop_when_steady = false;
    const StateField s0 = initial_cosine(p, g, 0.1, 1, CosineConvention::Scaled);
    return integrate(p, s, g, s0, cfg).final_state();
}

}  // namespace

TEST_CASE("grid geometry") {
    const Grid g(7.0, 256);
    CHECK(g.h() == doctest::Approx(7.0 / 256));
    CHECK(g.x(0) == doctest::Approx(0.5 * 7.0 / 256));
    CHECK(g.cell_of(0.0) == 0);
    CHECK(g.cell_of(7.0) == 255);
    CHECK(g.cell_of(3.5) == 128);
    CHECK_THROWS_AS(Grid(7.0, 8), Error);
}

TEST_CASE("right-hand side vanishes at the equilibrium and reduces to kinetics on uniform data") {
    const Parameters p = oracle::table1_params();
    const Sensitivity s = oracle::table1_sensitivity();
    const Grid g(p.L, 64);
    const Equilibrium e = equilibrium(p);
    const StateField r = rhs(p, s, g, uniform(g, e.u_bar, e.v_bar, e.w_bar));
    CHECK(max_abs(r.u) < 1e-12);
    CHECK(max_abs(r.v) < 1e-12);
    CHECK(max_abs(r.w) < 1e-12);

    const StateField q = rhs(p, s, g, uniform(g, 0.3, 1.4, 0.2));
    const Rates k = kinetics(p, 0.3, 1.4, 0.2);
    for (int i = 0; i < g.n(); ++i) {
        CHECK(q.u[i] == doctest::Approx(k.f1).epsilon(1e-14));
        CHECK(q.v[i] == doctest::Approx(k.f2).epsilon(1e-14));
        CHECK(q.w[i] == doctest::Approx(k.f3).epsilon(1e-14));
    }
}

TEST_CASE("transport part conserves mass to round-off") {
    const Parameters p = oracle::table1_params();
    const Sensitivity s = oracle::table1_sensitivity();
    const Grid g(p.L, 128);
    const StateField st = initial_cosine(p, g, 0.2, 3, CosineConvention::Scaled);
    const StateField r = rhs(p, s, g, st);
    double mu = 0, mv = 0, mw = 0, scale = 0;
    for (int i = 0; i < g.n(); ++i) {
        const Rates k = kinetics(p, st.u[i], st.v[i], st.w[i]);
        mu += (r.u[i] - k.f1) * g.h();
        mv += (r.v[i] - k.f2) * g.h();
        mw += (r.w[i] - k.f3) * g.h();
        scale = std::max({scale, std::abs(r.u[i]), std::abs(r.v[i])});
    }
    CHECK(std::abs(mu) < 1e-12 * scale * p.L);
    CHECK(std::abs(mv) < 1e-12 * scale * p.L);
    CHECK(std::abs(mw) < 1e-12 * scale * p.L);
}

TEST_CASE("uniform data follows the kinetic ODE") {
    const Parameters p = oracle::table1_params();
    const Sensitivity s = oracle::table1_sensitivity();
    const Grid g(p.L, 16);
    std::vector<double> times;
    for (int i = 0; i <= 20; ++i) times.push_back(0.5 * i);
    const auto ref = oracle::kinetics_trajectory(p, {0.4, 1.6, 0.3}, times, 1e-10);

    SolverConfig cfg;
    cfg.t_end = 10.0;
    cfg.dt_max = 0.01;
    cfg.snapshot_interval = 0.5;
    cfg.stop_when_steady = false;
    const RunRecord run = integrate(p, s, g, uniform(g, 0.4, 1.6, 0.3), cfg);
    REQUIRE(run.snapshots.size() == times.size());
    for (std::size_t j = 0; j < times.size(); ++j) {
        const StateField& sn = run.snapshots[j];
        CHECK(sn.t == doctest::Approx(times[j]).epsilon(1e-9));
        CHECK(std::abs(sn.u[5] - ref[j][0]) < 1e-6);
        CHECK(std::abs(sn.v[5] - ref[j][1]) < 1e-6);
        CHECK(std::abs(sn.w[5] - ref[j][2]) < 1e-6);
    }
    CHECK(run.violations == 0);
}

TEST_CASE("RK4 is fourth order in time") {
    const Parameters p = oracle::table1_params();
    const Sensitivity s = oracle::table1_sensitivity();
    const Grid g(p.L, 16);
    const auto ref = oracle::kinetics_trajectory(p, {0.4, 1.6, 0.3}, {0.0, 4.0}, 1e-13);
    SolverConfig cfg;
    auto error_at = [&](int steps) {
        StateField st = uniform(g, 0.4, 1.6, 0.3);
        const double dt = 4.0 / steps;
        for (int i = 0; i < steps; ++i) st = step(p, s, g, st, dt, cfg);
        return std::abs(st.u[0] - ref[1][0]) + std::abs(st.v[0] - ref[1][1]) + std::abs(st.w[0] - ref[1][2]);
    };
    const double e1 = error_at(80), e2 = error_at(160);
    const double ratio = e1 / e2;
    MESSAGE("temporal error ratio " << ratio);
    CHECK(ratio > 13.0);
    CHECK(ratio < 19.0);
}

TEST_CASE("spatial self-convergence is second order on the coupled system") {
    const Parameters p = oracle::table1_params();
    const Sensitivity s = oracle::table1_sensitivity();
    const StateField a = run_to(p, s, 32, 1.0), b = run_to(p, s, 64, 1.0), c = run_to(p, s, 128, 1.0);
    const double d1 = diff_l2(restrict_half(b.u), a.u) + diff_l2(restrict_half(b.w), a.w);
    const double d2 = diff_l2(restrict_half(c.u), b.u) + diff_l2(restrict_half(c.w), b.w);
    const double order = std::log2(d1 / d2);
    MESSAGE("spatial order " << order);
    CHECK(order > 1.8);
    CHECK(order < 2.2);
}

TEST_CASE("long fixed-step runs stay finite and positive") {
    const Parameters p = oracle::table1_params();
    const Sensitivity s = oracle::table1_sensitivity();
    const Grid g(p.L, 64);
    SolverConfig cfg;
    StateField st = initial_cosine(p, g, 0.01, 2, CosineConvention::Scaled);
    const double dt = 0.5 * step_size(p, s, g, st, cfg);
    for (int i = 0; i < 10000; ++i) st = step(p, s, g, st, dt, cfg);
    for (int i = 0; i < g.n(); ++i) {
        CHECK(std::isfinite(st.u[i]));
        CHECK(st.u[i] > 0.0);
        CHECK(st.w[i] > 0.0);
        CHECK(st.w[i] < 1.0);
    }
}

TEST_CASE("below the threshold the run settles on the equilibrium") {
    Parameters p = oracle::table1_params();
    p.chi = 2.0;
    const Sensitivity s = oracle::table1_sensitivity();
    const Grid g(p.L, 64);
    SolverConfig cfg;
    cfg.t_end = 5000.0;
    cfg.cfl_factor = 1.0;
    cfg.steady_tolerance = 1e-9;
    cfg.snapshot_interval = 0.0;
    const RunRecord run = integrate(p, s, g, initial_cosine(p, g, 0.05, 1, CosineConvention::Scaled), cfg);
    CHECK(run.termination == Termination::Steady);
    CHECK(run.violations == 0);
    const Equilibrium e = equilibrium(p);
    const StateField& f = run.final_state();
    for (int i = 0; i < g.n(); ++i) {
        CHECK(std::abs(f.u[i] - e.u_bar) < 1e-4);
        CHECK(std::abs(f.w[i] - e.w_bar) < 1e-4);
    }
}

TEST_CASE("zero-length run returns the initial state") {
    const Parameters p = oracle::table1_params();
    const Sensitivity s = oracle::table1_sensitivity();
    const Grid g(p.L, 32);
    SolverConfig cfg;
    cfg.t_end = 0.0;
    const StateField s0 = initial_cosine(p, g, 0.01, 1);
    const RunRecord run = integrate(p, s, g, s0, cfg);
    CHECK(run.termination == Termination::TEnd);
    CHECK(run.steps == 0);
    CHECK(run.snapshots.size() == 1);
    CHECK(run.final_state().u == s0.u);
}

TEST_CASE("initial data checks") {
    const Parameters p = oracle::table1_params();
    const Grid g(p.L, 32);
    const Equilibrium e = equilibrium(p);
    const StateField lit = initial_cosine(p, g, 0.01, 1);
    CHECK(lit.u[3] == doctest::Approx(e.u_bar + 0.01 * std::cos(std::numbers::pi * g.x(3))));
    const StateField sc = initial_cosine(p, g, 0.01, 1, CosineConvention::Scaled);
    CHECK(sc.w[3] == doctest::Approx(e.w_bar + 0.01 * std::cos(std::numbers::pi * g.x(3) / p.L)));
    try {
        initial_cosine(p, g, 1.0, 1);
        FAIL("expected AmplitudeTooLarge");
    } catch (const Error& err) {
        CHECK(err.code() == ErrorCode::AmplitudeTooLarge);
    }
}

TEST_CASE("guards stop the run and are recorded") {
    const Parameters p = oracle::table1_params();
    const Sensitivity s = oracle::table1_sensitivity();
    const Grid g(p.L, 32);
    SolverConfig cfg;
    cfg.t_end = 10.0;
    cfg.blowup_threshold = 1.5;  // u climbs toward u_bar, about 1.71
    const RunRecord blown = integrate(p, s, g, uniform(g, 1.0, 1.0, 0.5), cfg);
    CHECK(blown.termination == Termination::BlowupGuard);
    CHECK_FALSE(blown.failure.empty());

    SolverConfig mon;
    mon.t_end = 1.0;
    StateField bad = uniform(g, 1.0, 1.0, 0.5);
    bad.u[4] = -0.1;
    const RunRecord flagged = integrate(p, s, g, bad, mon);
    CHECK(flagged.termination == Termination::Violation);
    CHECK(flagged.violations > 0);
    CHECK_FALSE(flagged.log.empty());
}

TEST_CASE("runs are bit-for-bit reproducible") {
    const Parameters p = oracle::table1_params();
    const Sensitivity s = oracle::table1_sensitivity();
    const StateField a = run_to(p, s, 64, 2.0), b = run_to(p, s, 64, 2.0);
    REQUIRE(a.u.size() == b.u.size());
    CHECK(std::memcmp(a.u.data(), b.u.data(), a.u.size() * sizeof(double)) == 0);
    CHECK(std::memcmp(a.w.data(), b.w.data(), a.w.size() * sizeof(double)) == 0);
}
