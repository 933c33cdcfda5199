#pragma once

#include "preytaxis/model.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace preytaxis {

/// Uniform cell-centered grid on (0, L): x_i = (i + 1/2) h.
class Grid {
public:
    Grid(double L, int n);
    double L() const { return L_; }
    int n() const { return n_; }
    double h() const { return h_; }
    double x(int i) const { return (i + 0.5) * h_; }
    /// Index of the cell containing x, clamped to the domain.
    int cell_of(double x) const;

private:
    double L_;
    int n_;
    double h_;
};

struct StateField {
    std::vector<double> u, v, w;
    double t = 0.0;
};

enum class Termination { Steady, TEnd, BlowupGuard, Violation };
std::string_view to_string(Termination t);

/// How the `cos(m pi x)` perturbation is read on (0, L).
enum class CosineConvention {
    Literal,  // cos(m pi x), as printed
    Scaled,   // cos(m pi x / L), a Neumann eigenfunction
};

struct SolverConfig {
    double cfl_factor = 0.25;
    double dt_max = 0.1;
    double t_end = 100.0;
    double snapshot_interval = 10.0;   // <= 0: initial and final only
    double probe_interval = 0.05;
    double steady_check_interval = 1.0;
    double steady_tolerance = 1e-7;    // max-norm of the time derivative
    int steady_checks = 3;             // consecutive passes required
    double steady_min_time = 0.0;      // no steady stop before t0 + this
    bool stop_when_steady = true;
    std::vector<double> probe_x{0.0};  // mapped to the containing cell

    bool monitor_positivity = true;
    bool monitor_w_range = true;
    bool monitor_l1 = true;
    bool abort_on_violation = true;

    double blowup_threshold = 1e6;
    double dt_min = 1e-14;
};

struct ProbeSample {
    double t, u, v, w;
};

struct ProbeSeries {
    double x;
    int cell;
    std::vector<ProbeSample> samples;
};

struct MonitorEvent {
    double t;
    std::string message;
};

struct RunRecord {
    std::vector<StateField> snapshots;  // strictly increasing t; last entry is the final state
    std::vector<ProbeSeries> probes;
    std::vector<MonitorEvent> log;
    Termination termination = Termination::TEnd;
    std::string failure;                // message of the guard that stopped the run
    long long steps = 0;
    double last_rate = 0.0;             // max |d/dt| at the final steady check
    int violations = 0;

    const StateField& final_state() const { return snapshots.back(); }
};

/// Time derivative of the semi-discrete system (conservative flux form).
/// Throws NonFiniteState on a non-finite input value.
StateField rhs(const Parameters& p, const Sensitivity& s, const Grid& g, const StateField& state);

/// Stable step size for the current state under `cfg`; also reports the
/// interface maximum of |phi(w) w_x| it used.
double step_size(const Parameters& p, const Sensitivity& s, const Grid& g, const StateField& state,
                 const SolverConfig& cfg, double* taxis_speed = nullptr);

/// One classical RK4 step of size dt. Throws BlowupGuard or NonFiniteState.
StateField step(const Parameters& p, const Sensitivity& s, const Grid& g, const StateField& state,
                double dt, const SolverConfig& cfg);

/// Equilibrium plus independent per-species amplitudes times cos(mode pi x [/L]).
StateField initial_profile(const Parameters& p, const Grid& g, double amp_u, double amp_v,
                           double amp_w, int mode, CosineConvention convention);

/// Equilibrium plus amplitude*cos(...) in every species. Throws
/// AmplitudeTooLarge when a value is nonpositive or, with `check_w_range`,
/// when w leaves [0, 1].
StateField initial_cosine(const Parameters& p, const Grid& g, double amplitude, int mode,
                          CosineConvention convention = CosineConvention::Literal,
                          bool check_w_range = true);

RunRecord integrate(const Parameters& p, const Sensitivity& s, const Grid& g, StateField state0,
                    const SolverConfig& cfg);

}  // namespace preytaxis
