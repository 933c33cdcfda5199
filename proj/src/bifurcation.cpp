#include "preytaxis/bifurcation.hpp"

#include "preytaxis/error.hpp"
#include "preytaxis/report.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace preytaxis {

namespace {

struct Context {
    Equilibrium e;
    Damping h;
    Sensitivity::Values phi;
    double chi;  // chi_S_k
};

Context context(const Parameters& p, const Sensitivity& s, int k) {
    if (k < 1) throw Error(ErrorCode::ZeroMode, "mode k must be >= 1");
    const Equilibrium e = equilibrium(p);
    const auto phi = s.eval(e.w_bar);
    if (phi.phi == 0.0) throw Error(ErrorCode::SensitivityVanishesAtEquilibrium, "phi(w_bar) = 0");
    return {e, damping(p, e, k), phi, chi_S(p, s, k)};
}

double max_abs(const Mat3& m) {
    double best = 0.0;
    for (const auto& row : m)
        for (double x : row) best = std::max(best, std::abs(x));
    return best;
}

double relative_residual(const Mat3& m, const Vec3& x, const Vec3& b) {
    const Vec3 ax = mul(m, x);
    const Vec3 r{ax[0] - b[0], ax[1] - b[1], ax[2] - b[2]};
    const double scale = 3.0 * max_abs(m) * norm_inf(x) + norm_inf(b);
    return scale > 0.0 ? norm_inf(r) / scale : 0.0;
}

double solver_gap(const LinearSolve& s) {
    const Vec3 d{s.cramer[0] - s.elimination[0], s.cramer[1] - s.elimination[1],
                 s.cramer[2] - s.elimination[2]};
    const double scale = norm_inf(s.elimination);
    return scale > 0.0 ? norm_inf(d) / scale : norm_inf(d);
}

}  // namespace

ModeAmplitudes mode_amplitudes(const Parameters& p, const Sensitivity& s, int k) {
    const Context c = context(p, s, k);
    const double Q = (p.xi * c.e.v_bar * c.phi.phi * c.h.q2 + p.beta2 * c.e.v_bar) / c.h.H2;
    const double P = -p.beta32 / p.beta31 * Q - c.h.H3 / (p.beta31 * c.e.w_bar);
    return {P, Q};
}

Mat3 matrix_M(const Parameters& p, const Sensitivity& s, int k) {
    const Context c = context(p, s, k);
    const auto [P, Q] = mode_amplitudes(p, s, k);
    return Mat3{{
        {0.0, c.h.H2, -p.xi * c.e.v_bar * c.phi.phi * c.h.q2 - p.beta2 * c.e.v_bar},
        {p.beta31 * c.e.w_bar, p.beta32 * c.e.w_bar, c.h.H3},
        {P, Q, 1.0},
    }};
}

double det_M(const Parameters& p, const Sensitivity& s, int k) { return det3(matrix_M(p, s, k)); }

double det_M_closed_form(const Parameters& p, const Sensitivity& s, int k) {
    const Context c = context(p, s, k);
    const double Q = mode_amplitudes(p, s, k).Q;
    const double wb = c.e.w_bar, H2 = c.h.H2, H3 = c.h.H3;
    // The Q^2 coefficient carries beta32 squared; expanding the product form confirms it.
    return -(p.beta32 * p.beta32 * wb * H2 / p.beta31 + p.beta31 * wb * H2) * Q * Q -
           (H2 * H3 * H3 / (p.beta31 * wb) + p.beta31 * wb * H2) -
           2.0 * p.beta32 * H2 * H3 / p.beta31 * Q;
}

FirstOrderSolve first_order_solve(const Parameters& p, const Sensitivity& s, int k) {
    const Context c = context(p, s, k);
    const auto [P, Q] = mode_amplitudes(p, s, k);
    const double ub = c.e.u_bar, vb = c.e.v_bar, wb = c.e.w_bar;
    const double phi = c.phi.phi, dphi = c.phi.dphi, q2 = c.h.q2, L = p.L;

    FirstOrderSolve out{};
    out.mean_matrix = Mat3{{
        {p.alpha1 * ub, 0.0, -p.beta1 * ub},
        {0.0, p.alpha2 * vb, -p.beta2 * vb},
        {p.beta31 * wb, p.beta32 * wb, p.alpha3 * wb},
    }};
    out.mean_rhs = {-0.5 * L * P * (p.alpha1 * P - p.beta1), -0.5 * L * Q * (p.alpha2 * Q - p.beta2),
                    -0.5 * L * (p.beta31 * P + p.beta32 * Q + p.alpha3)};

    // cos(2qx) has squared wave number 4 q^2, taxis included.
    out.double_matrix = Mat3{{
        {4.0 * p.d1 * q2 + p.alpha1 * ub, 0.0, -4.0 * c.chi * ub * phi * q2 - p.beta1 * ub},
        {0.0, 4.0 * p.d2 * q2 + p.alpha2 * vb, -4.0 * p.xi * vb * phi * q2 - p.beta2 * vb},
        {p.beta31 * wb, p.beta32 * wb, 4.0 * p.d3 * q2 + p.alpha3 * wb},
    }};
    out.double_rhs = {
        c.chi * 0.5 * L * q2 * (ub * dphi + P * phi) - 0.25 * L * (p.alpha1 * P - p.beta1) * P,
        p.xi * 0.5 * L * q2 * (vb * dphi + Q * phi) - 0.25 * L * (p.alpha2 * Q - p.beta2) * Q,
        -0.25 * L * (p.alpha3 + p.beta31 * P + p.beta32 * Q),
    };

    const LinearSolve mean = solve3(out.mean_matrix, out.mean_rhs, "mean-mode matrix B0");
    const LinearSolve dbl = solve3(out.double_matrix, out.double_rhs, "double-mode matrix C0");
    out.integrals = {mean.cramer[0], mean.cramer[1], mean.cramer[2],
                     dbl.cramer[0],  dbl.cramer[1],  dbl.cramer[2]};
    out.mean_condition = mean.condition;
    out.double_condition = dbl.condition;
    out.mean_residual = relative_residual(out.mean_matrix, mean.cramer, out.mean_rhs);
    out.double_residual = relative_residual(out.double_matrix, dbl.cramer, out.double_rhs);
    out.mean_solver_gap = solver_gap(mean);
    out.double_solver_gap = solver_gap(dbl);
    return out;
}

FirstOrderIntegrals first_order_integrals(const Parameters& p, const Sensitivity& s, int k) {
    return first_order_solve(p, s, k).integrals;
}

SecondOrderSolve second_order_solve(const Parameters& p, const Sensitivity& s, int k,
                                    const FirstOrderIntegrals& f) {
    const Context c = context(p, s, k);
    const auto [P, Q] = mode_amplitudes(p, s, k);
    const double phi = c.phi.phi, dphi = c.phi.dphi, ddphi = c.phi.ddphi, q2 = c.h.q2, L = p.L;
    const double wsum = f.mean_w + f.double_w;

    // cos(qx) projection of the quadratic terms of a predator equation; the
    // last bracket holds the cubic forcing from the O(s) mode alone.
    auto forcing = [&](double alpha, double beta, double amp, double bar, double taxis,
                       double mean, double dbl) {
        const double g = phi * amp + bar * dphi;
        return -alpha * amp * (mean + dbl) + beta * (amp * wsum / 2.0 + (mean + dbl) / 2.0) +
               taxis * q2 *
                   (g * f.double_w + phi * (mean - dbl) / 2.0 +
                    bar * dphi * (f.mean_w - f.double_w) / 2.0 +
                    (dphi * amp + 0.5 * bar * ddphi) * L / 8.0);
    };

    SecondOrderSolve out{};
    out.u_forcing = forcing(p.alpha1, p.beta1, P, c.e.u_bar, c.chi, f.mean_u, f.double_u);
    out.M1 = forcing(p.alpha2, p.beta2, Q, c.e.v_bar, p.xi, f.mean_v, f.double_v);
    out.M2 = -p.alpha3 * wsum - p.beta31 * (P * wsum / 2.0 + (f.mean_u + f.double_u) / 2.0) -
             p.beta32 * (Q * wsum / 2.0 + (f.mean_v + f.double_v) / 2.0);

    out.matrix = matrix_M(p, s, k);
    const Vec3 rhs{out.M1, out.M2, 0.0};
    const LinearSolve sol = solve3(out.matrix, rhs, "second-order matrix A0");
    out.integrals = {sol.cramer[0], sol.cramer[1], sol.cramer[2]};
    out.determinant = sol.determinant;
    out.residual = relative_residual(out.matrix, sol.cramer, rhs);
    out.solver_gap = solver_gap(sol);
    return out;
}

SecondOrderIntegrals second_order_integrals(const Parameters& p, const Sensitivity& s, int k,
                                            const FirstOrderIntegrals& f) {
    return second_order_solve(p, s, k, f).integrals;
}

K2Result compute_K2(const Parameters& p, const Sensitivity& s, int k) {
    const Context c = context(p, s, k);
    const double ch = chi_H(p, s, k);
    if (std::abs(c.chi - ch) <= kDegeneracyTolerance * std::max(std::abs(c.chi), std::abs(ch)))
        throw Error(ErrorCode::DegenerateBranch,
                    "chi_S and chi_H coincide at k = " + std::to_string(k));

    K2Result r;
    r.k = k;
    r.chi_S = c.chi;
    r.amplitudes = mode_amplitudes(p, s, k);
    r.first = first_order_solve(p, s, k);
    r.second = second_order_solve(p, s, k, r.first.integrals);
    r.detM = det_M(p, s, k);

    // u-row projection: the O(s^2) correction must absorb the chi shift.
    const double ub = c.e.u_bar, q2 = c.h.q2, phi = c.phi.phi;
    const auto& x = r.second.integrals;
    const double lhs = c.h.H1 * x.u - (c.chi * ub * phi * q2 + p.beta1 * ub) * x.w - r.second.u_forcing;
    r.K2 = lhs / (ub * phi * q2 * p.L / 2.0);
    return r;
}

std::string ledger_text(const K2Result& r) {
    std::ostringstream os;
    auto line = [&](std::string_view name, double v) { os << name << " = " << format_number(v, 9) << '\n'; };
    os << "k = " << r.k << '\n';
    line("chi_S_k", r.chi_S);
    line("P_k", r.amplitudes.P);
    line("Q_k", r.amplitudes.Q);
    const auto& f = r.first.integrals;
    line("int u1", f.mean_u);
    line("int v1", f.mean_v);
    line("int w1", f.mean_w);
    line("int u1 cos2", f.double_u);
    line("int v1 cos2", f.double_v);
    line("int w1 cos2", f.double_w);
    line("M3", r.first.double_rhs[0]);
    line("M4", r.first.double_rhs[1]);
    line("w-row forcing (double mode)", r.first.double_rhs[2]);
    line("cond(B0)", r.first.mean_condition);
    line("cond(C0)", r.first.double_condition);
    line("residual(B0)", r.first.mean_residual);
    line("residual(C0)", r.first.double_residual);
    line("M1", r.second.M1);
    line("M2", r.second.M2);
    line("u-row forcing", r.second.u_forcing);
    line("int u2 cos", r.second.integrals.u);
    line("int v2 cos", r.second.integrals.v);
    line("int w2 cos", r.second.integrals.w);
    line("residual(A0)", r.second.residual);
    line("det(A0)", r.second.determinant);
    line("detM", r.detM);
    line("K2", r.K2);
    return os.str();
}

std::string_view to_string(BranchKind kind) {
    return kind == BranchKind::SteadyState ? "SteadyState" : "Hopf";
}

std::string_view to_string(BranchStability st) {
    switch (st) {
    case BranchStability::Stable: return "Stable";
    case BranchStability::Unstable: return "Unstable";
    case BranchStability::Undetermined: return "Undetermined-supercritical";
    case BranchStability::NotApplicable: return "NotApplicable";
    }
    return "?";
}

std::vector<BranchVerdict> branch_verdict(const Parameters& p, const Sensitivity& s, int kmax) {
    const ThresholdTable table = chi_zero(p, s, kmax);
    if (table.kind == InstabilityKind::AlwaysStable)
        throw Error(ErrorCode::NotGroupDefense, "phi(w_bar) > 0: no destabilizing threshold");
    if (table.kind == InstabilityKind::Degenerate)
        throw Error(ErrorCode::DegenerateBranch,
                    "leading chi_S and chi_H coincide at k = " + std::to_string(table.k_star));

    std::vector<BranchVerdict> out;
    out.reserve(2 * static_cast<std::size_t>(kmax));
    const int k0 = table.k_star;
    if (table.kind == InstabilityKind::SteadyState) {
        const double K2 = compute_K2(p, s, k0).K2;
        for (int k = 1; k <= kmax; ++k) {
            if (k == k0)
                out.push_back({k, BranchKind::SteadyState,
                               K2 > 0.0 ? BranchStability::Stable : BranchStability::Unstable,
                               K2 > 0.0 ? "leading steady branch with K2 > 0"
                                        : "leading steady branch with K2 < 0"});
            else
                out.push_back({k, BranchKind::SteadyState, BranchStability::Unstable,
                               "steady branch off the leading mode"});
        }
        for (int k = 1; k <= kmax; ++k)
            out.push_back({k, BranchKind::Hopf, BranchStability::NotApplicable,
                           "steady-state threshold is reached first"});
    } else {
        for (int k = 1; k <= kmax; ++k)
            out.push_back({k, BranchKind::SteadyState, BranchStability::Unstable,
                           "Hopf threshold is reached first"});
        for (int k = 1; k <= kmax; ++k) {
            if (k == k0)
                out.push_back({k, BranchKind::Hopf, BranchStability::Undetermined,
                               "leading Hopf branch, stable if supercritical"});
            else
                out.push_back({k, BranchKind::Hopf, BranchStability::Unstable,
                               "Hopf branch right of the leading one"});
        }
    }
    return out;
}

}  // namespace preytaxis
