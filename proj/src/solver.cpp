#include "preytaxis/solver.hpp"

#include "preytaxis/error.hpp"
#include "preytaxis/report.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <span>

namespace preytaxis {

Grid::Grid(double L, int n) : L_(L), n_(n), h_(L / n) {
    if (!(L > 0.0)) throw Error(ErrorCode::NonPositiveParameter, "grid length L");
    if (n < 16) throw Error(ErrorCode::ConfigError, "grid needs n >= 16 cells");
}

int Grid::cell_of(double x) const {
    const int i = static_cast<int>(std::floor(x / h_));
    return std::clamp(i, 0, n_ - 1);
}

std::string_view to_string(Termination t) {
    switch (t) {
    case Termination::Steady: return "steady";
    case Termination::TEnd: return "t_end";
    case Termination::BlowupGuard: return "blowup-guard";
    case Termination::Violation: return "violation";
    }
    return "?";
}

namespace {

using Span = std::span<double>;
using CSpan = std::span<const double>;

/// Van Leer-limited cell increment; zero at extrema and at the walls, where
/// the mirrored ghost cell makes one one-sided difference vanish.
double limited_increment(CSpan f, int i) {
    const int n = static_cast<int>(f.size());
    if (i <= 0 || i >= n - 1) return 0.0;
    const double a = f[i] - f[i - 1], b = f[i + 1] - f[i];
    return a * b > 0.0 ? 2.0 * a * b / (a + b) : 0.0;
}

/// Upwinded face value of f between cells i and i + 1 for a drift velocity.
/// The limiter keeps it between neighbouring cell values, which is what keeps
/// strong taxis from driving densities negative.
double upwind_face(CSpan f, int i, double velocity) {
    return velocity >= 0.0 ? f[i] + 0.5 * limited_increment(f, i) : f[i + 1] - 0.5 * limited_increment(f, i + 1);
}

/// Flux-form right-hand side into preallocated buffers. Returns the interface
/// maximum of |phi(w) w_x|.
double eval_rhs(const Parameters& p, const Sensitivity& s, const Grid& g, CSpan u, CSpan v, CSpan w,
                Span du, Span dv, Span dw, Span flux_u, Span flux_v, Span flux_w) {
    const int n = g.n();
    const double inv_h = 1.0 / g.h();
    double taxis_max = 0.0;

    for (int i = 0; i + 1 < n; ++i) {
        const double gw = (w[i + 1] - w[i]) * inv_h;
        const double drift = s(0.5 * (w[i] + w[i + 1])) * gw;
        taxis_max = std::max(taxis_max, std::abs(drift));
        // The stored flux is minus the transport flux, so predators move with +chi * drift.
        const double vel_u = p.chi * drift, vel_v = p.xi * drift;
        flux_u[i] = p.d1 * (u[i + 1] - u[i]) * inv_h - vel_u * upwind_face(u, i, vel_u);
        flux_v[i] = p.d2 * (v[i + 1] - v[i]) * inv_h - (p.xi == 0.0 ? 0.0 : vel_v * upwind_face(v, i, vel_v));
        flux_w[i] = p.d3 * gw;
    }

    for (int i = 0; i < n; ++i) {
        const double left_u = i > 0 ? flux_u[i - 1] : 0.0, right_u = i + 1 < n ? flux_u[i] : 0.0;
        const double left_v = i > 0 ? flux_v[i - 1] : 0.0, right_v = i + 1 < n ? flux_v[i] : 0.0;
        const double left_w = i > 0 ? flux_w[i - 1] : 0.0, right_w = i + 1 < n ? flux_w[i] : 0.0;
        const Rates r = kinetics(p, u[i], v[i], w[i]);
        du[i] = (right_u - left_u) * inv_h + r.f1;
        dv[i] = (right_v - left_v) * inv_h + r.f2;
        dw[i] = (right_w - left_w) * inv_h + r.f3;
    }
    return taxis_max;
}

void require_finite(const StateField& st) {
    for (const auto* field : {&st.u, &st.v, &st.w})
        for (double x : *field)
            if (!std::isfinite(x))
                throw Error(ErrorCode::NonFiniteState, "non-finite state at t = " + format_number(st.t));
}

double dt_rule(const Parameters& p, const Grid& g, const SolverConfig& cfg, double taxis_speed) {
    const double h = g.h();
    const double dmax = std::max({p.d1, p.d2, p.d3});
    const double denom = 2.0 * dmax + h * std::abs(p.chi) * taxis_speed + h * std::abs(p.xi) * taxis_speed;
    return std::min(cfg.cfl_factor * h * h / denom, cfg.dt_max);
}

/// Owns the RK4 stage buffers so the time loop never allocates.
class Stepper {
public:
    Stepper(const Parameters& p, const Sensitivity& s, const Grid& g)
        : p_(p), s_(s), g_(g), n_(static_cast<std::size_t>(g.n())),
          k_(4, Triple(n_)), tmp_(n_), flux_(n_) {}

    /// Derivative at `st` into stage 0; returns the taxis speed.
    double derivative(const StateField& st) {
        return eval(st.u, st.v, st.w, k_[0]);
    }

    double rate_norm() const {
        double m = 0.0;
        for (const auto* f : {&k_[0].u, &k_[0].v, &k_[0].w})
            for (double x : *f) m = std::max(m, std::abs(x));
        return m;
    }

    /// Advances `st` by dt, assuming derivative(st) was just called.
    void advance(StateField& st, double dt) {
        const std::size_t n = n_;
        auto stage = [&](const Triple& k, double c, Triple& out) {
            for (std::size_t i = 0; i < n; ++i) {
                out.u[i] = st.u[i] + c * k.u[i];
                out.v[i] = st.v[i] + c * k.v[i];
                out.w[i] = st.w[i] + c * k.w[i];
            }
        };
        stage(k_[0], 0.5 * dt, tmp_);
        eval(tmp_.u, tmp_.v, tmp_.w, k_[1]);
        stage(k_[1], 0.5 * dt, tmp_);
        eval(tmp_.u, tmp_.v, tmp_.w, k_[2]);
        stage(k_[2], dt, tmp_);
        eval(tmp_.u, tmp_.v, tmp_.w, k_[3]);
        const double c = dt / 6.0;
        for (std::size_t i = 0; i < n; ++i) {
            st.u[i] += c * (k_[0].u[i] + 2.0 * (k_[1].u[i] + k_[2].u[i]) + k_[3].u[i]);
            st.v[i] += c * (k_[0].v[i] + 2.0 * (k_[1].v[i] + k_[2].v[i]) + k_[3].v[i]);
            st.w[i] += c * (k_[0].w[i] + 2.0 * (k_[1].w[i] + k_[2].w[i]) + k_[3].w[i]);
        }
        st.t += dt;
    }

    const std::vector<double>& du() const { return k_[0].u; }
    const std::vector<double>& dv() const { return k_[0].v; }
    const std::vector<double>& dw() const { return k_[0].w; }

private:
    struct Triple {
        explicit Triple(std::size_t n) : u(n), v(n), w(n) {}
        std::vector<double> u, v, w;
    };

    double eval(CSpan u, CSpan v, CSpan w, Triple& out) {
        return eval_rhs(p_, s_, g_, u, v, w, out.u, out.v, out.w, flux_.u, flux_.v, flux_.w);
    }

    const Parameters& p_;
    const Sensitivity& s_;
    const Grid& g_;
    std::size_t n_;
    std::vector<Triple> k_;
    Triple tmp_;
    Triple flux_;
};

void guard_blowup(const StateField& st, const SolverConfig& cfg) {
    for (const auto* f : {&st.u, &st.v, &st.w}) {
        for (double x : *f) {
            if (!std::isfinite(x))
                throw Error(ErrorCode::NonFiniteState, "non-finite state at t = " + format_number(st.t));
            if (std::abs(x) > cfg.blowup_threshold)
                throw Error(ErrorCode::BlowupGuard,
                            "|field| > " + format_number(cfg.blowup_threshold) + " at t = " + format_number(st.t));
        }
    }
}

double cell_sum(const std::vector<double>& f, double h) {
    double s = 0.0;
    for (double x : f) s += x;
    return s * h;
}

/// Runtime checks of positivity, the w-range and the L1 bounds.
class Monitors {
public:
    Monitors(const Parameters& p, const Grid& g, const StateField& s0, const SolverConfig& cfg, RunRecord& rec)
        : p_(p), g_(g), cfg_(cfg), rec_(rec),
          mass_u0_(cell_sum(s0.u, g.h())), mass_v0_(cell_sum(s0.v, g.h())) {
        w_range_ = cfg.monitor_w_range;
        for (double x : s0.w) {
            if (x < 0.0 || x > 1.0) {
                if (w_range_) rec_.log.push_back({s0.t, "w-range monitor disarmed: w0 outside [0,1]"});
                w_range_ = false;
                break;
            }
        }
        sup_w_ = *std::max_element(s0.w.begin(), s0.w.end());
    }

    /// Returns true when a violation should stop the run.
    bool check(const StateField& st) {
        bool bad = false;
        if (cfg_.monitor_positivity) {
            bad |= first_below(st.u, "u", st.t) | first_below(st.v, "v", st.t) | first_below(st.w, "w", st.t);
        }
        for (std::size_t i = 0; i < st.w.size(); ++i) sup_w_ = std::max(sup_w_, st.w[i]);
        if (w_range_) {
            constexpr double tol = 1e-10;
            for (std::size_t i = 0; i < st.w.size(); ++i) {
                if (st.w[i] <= -tol || st.w[i] >= 1.0 + tol) {
                    report(st.t, "w-range violated: w[" + std::to_string(i) + "] = " + format_number(st.w[i]));
                    bad = true;
                    break;
                }
            }
        }
        if (cfg_.monitor_l1) {
            const double h = g_.h();
            const double bound_u = std::max(mass_u0_, p_.L * (1.0 + p_.beta1 / p_.alpha1 * sup_w_)) + 1e-6;
            const double bound_v = std::max(mass_v0_, p_.L * (1.0 + p_.beta2 / p_.alpha2 * sup_w_)) + 1e-6;
            const double mu = cell_sum(st.u, h), mv = cell_sum(st.v, h);
            if (mu > bound_u) {
                report(st.t, "L1 bound violated: sum u h = " + format_number(mu) + " > " + format_number(bound_u));
                bad = true;
            }
            if (mv > bound_v) {
                report(st.t, "L1 bound violated: sum v h = " + format_number(mv) + " > " + format_number(bound_v));
                bad = true;
            }
        }
        return bad && cfg_.abort_on_violation;
    }

private:
    bool first_below(const std::vector<double>& f, const char* name, double t) {
        for (std::size_t i = 0; i < f.size(); ++i) {
            if (f[i] < 0.0) {
                report(t, std::string("positivity violated: ") + name + "[" + std::to_string(i) +
                              "] = " + format_number(f[i]));
                return true;
            }
        }
        return false;
    }

    void report(double t, std::string msg) {
        ++rec_.violations;
        // Keep the log readable when a violation persists.
        if (rec_.violations <= 20) rec_.log.push_back({t, std::move(msg)});
    }

    const Parameters& p_;
    const Grid& g_;
    const SolverConfig& cfg_;
    RunRecord& rec_;
    double mass_u0_, mass_v0_;
    double sup_w_ = 0.0;
    bool w_range_ = true;
};

void record_probes(RunRecord& rec, const StateField& st) {
    for (auto& pr : rec.probes) {
        const auto c = static_cast<std::size_t>(pr.cell);
        pr.samples.push_back({st.t, st.u[c], st.v[c], st.w[c]});
    }
}

}  // namespace

StateField rhs(const Parameters& p, const Sensitivity& s, const Grid& g, const StateField& state) {
    require_finite(state);
    const auto n = static_cast<std::size_t>(g.n());
    StateField out{std::vector<double>(n), std::vector<double>(n), std::vector<double>(n), state.t};
    std::vector<double> fu(n), fv(n), fw(n);
    eval_rhs(p, s, g, state.u, state.v, state.w, out.u, out.v, out.w, fu, fv, fw);
    return out;
}

double step_size(const Parameters& p, const Sensitivity& s, const Grid& g, const StateField& state,
                 const SolverConfig& cfg, double* taxis_speed) {
    const auto n = static_cast<std::size_t>(g.n());
    std::vector<double> a(n), b(n), c(n), fu(n), fv(n), fw(n);
    const double speed = eval_rhs(p, s, g, state.u, state.v, state.w, a, b, c, fu, fv, fw);
    if (taxis_speed) *taxis_speed = speed;
    return dt_rule(p, g, cfg, speed);
}

StateField step(const Parameters& p, const Sensitivity& s, const Grid& g, const StateField& state,
                double dt, const SolverConfig& cfg) {
    require_finite(state);
    if (dt < cfg.dt_min) throw Error(ErrorCode::StepSizeUnderflow, "dt = " + format_number(dt));
    Stepper stepper(p, s, g);
    StateField next = state;
    stepper.derivative(next);
    stepper.advance(next, dt);
    guard_blowup(next, cfg);
    return next;
}

StateField initial_profile(const Parameters& p, const Grid& g, double amp_u, double amp_v, double amp_w,
                           int mode, CosineConvention convention) {
    const Equilibrium e = equilibrium(p);
    const auto n = static_cast<std::size_t>(g.n());
    StateField st{std::vector<double>(n), std::vector<double>(n), std::vector<double>(n), 0.0};
    const double scale = convention == CosineConvention::Literal ? 1.0 : 1.0 / g.L();
    for (std::size_t i = 0; i < n; ++i) {
        const double c = std::cos(mode * std::numbers::pi * g.x(static_cast<int>(i)) * scale);
        st.u[i] = e.u_bar + amp_u * c;
        st.v[i] = e.v_bar + amp_v * c;
        st.w[i] = e.w_bar + amp_w * c;
    }
    return st;
}

StateField initial_cosine(const Parameters& p, const Grid& g, double amplitude, int mode,
                          CosineConvention convention, bool check_w_range) {
    StateField st = initial_profile(p, g, amplitude, amplitude, amplitude, mode, convention);
    for (std::size_t i = 0; i < st.u.size(); ++i) {
        if (st.u[i] <= 0.0 || st.v[i] <= 0.0 || st.w[i] <= 0.0)
            throw Error(ErrorCode::AmplitudeTooLarge, "initial value <= 0 at cell " + std::to_string(i));
        if (check_w_range && st.w[i] > 1.0)
            throw Error(ErrorCode::AmplitudeTooLarge, "initial w > 1 at cell " + std::to_string(i));
    }
    return st;
}

RunRecord integrate(const Parameters& p, const Sensitivity& s, const Grid& g, StateField state,
                    const SolverConfig& cfg) {
    require_finite(state);
    if (state.u.size() != static_cast<std::size_t>(g.n()) || state.v.size() != state.u.size() ||
        state.w.size() != state.u.size())
        throw Error(ErrorCode::ConfigError, "state size does not match the grid");

    RunRecord rec;
    for (double x : cfg.probe_x) rec.probes.push_back({x, g.cell_of(x), {}});
    rec.snapshots.push_back(state);
    record_probes(rec, state);

    Monitors monitors(p, g, state, cfg, rec);
    Stepper stepper(p, s, g);

    const double t0 = state.t;
    const double t_end = t0 + cfg.t_end;
    double next_snapshot = cfg.snapshot_interval > 0 ? t0 + cfg.snapshot_interval : t_end + 1.0;
    double next_probe = t0 + cfg.probe_interval;
    double next_check = t0 + cfg.steady_check_interval;
    const double snap_eps = 1e-12 * std::max(1.0, std::abs(t_end));
    double taxis_speed = 0.0;
    int steady_passes = 0;
    rec.last_rate = std::numeric_limits<double>::infinity();
    rec.termination = Termination::TEnd;

    try {
        while (t_end - state.t > 1e-12 * std::max(1.0, std::abs(t_end))) {
            taxis_speed = std::max(taxis_speed, stepper.derivative(state));
            if (state.t >= next_check) {
                next_check += cfg.steady_check_interval;
                const double rate = stepper.rate_norm();
                // A growing rate means an unstable state is being left, however slowly.
                const bool settling = rate <= rec.last_rate || rate < 1e-3 * cfg.steady_tolerance;
                steady_passes = rate < cfg.steady_tolerance && settling ? steady_passes + 1 : 0;
                rec.last_rate = rate;
                if (cfg.stop_when_steady && steady_passes >= cfg.steady_checks && state.t >= t0 + cfg.steady_min_time) {
                    rec.termination = Termination::Steady;
                    rec.log.push_back({state.t, "steady: max |d/dt| = " + format_number(rec.last_rate)});
                    break;
                }
            }
            const double dt_full = dt_rule(p, g, cfg, taxis_speed);
            if (dt_full < cfg.dt_min)
                throw Error(ErrorCode::StepSizeUnderflow, "dt = " + format_number(dt_full) + " at t = " +
                                                              format_number(state.t));
            // Land on snapshot times so outputs sit on the requested grid.
            double dt = std::min(dt_full, t_end - state.t);
            if (next_snapshot - state.t > snap_eps) dt = std::min(dt, next_snapshot - state.t);
            stepper.advance(state, dt);
            ++rec.steps;
            guard_blowup(state, cfg);

            if (monitors.check(state)) {
                rec.termination = Termination::Violation;
                rec.failure = rec.log.empty() ? "monitor violation" : rec.log.back().message;
                break;
            }
            if (state.t >= next_probe) {
                record_probes(rec, state);
                while (next_probe <= state.t) next_probe += cfg.probe_interval;
            }
            if (state.t >= next_snapshot - snap_eps) {
                rec.snapshots.push_back(state);
                while (next_snapshot <= state.t + snap_eps) next_snapshot += cfg.snapshot_interval;
            }
        }
    } catch (const Error& err) {
        if (err.code() != ErrorCode::BlowupGuard && err.code() != ErrorCode::NonFiniteState &&
            err.code() != ErrorCode::StepSizeUnderflow)
            throw;
        rec.termination = Termination::BlowupGuard;
        rec.failure = std::string(to_string(err.code())) + ": " + err.what();
        rec.log.push_back({state.t, rec.failure});
    }

    if (rec.snapshots.back().t < state.t) rec.snapshots.push_back(state);
    if (rec.probes.empty() || rec.probes.front().samples.empty() ||
        rec.probes.front().samples.back().t < state.t)
        record_probes(rec, state);
    return rec;
}

}  // namespace preytaxis
