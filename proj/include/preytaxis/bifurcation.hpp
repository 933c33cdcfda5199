#pragma once

#include "preytaxis/linalg.hpp"
#include "preytaxis/model.hpp"
#include "preytaxis/stability.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace preytaxis {

/// Null vector (P, Q, 1) of the mode-k matrix at chi_S_k.
struct ModeAmplitudes {
    double P, Q;
};

ModeAmplitudes mode_amplitudes(const Parameters& p, const Sensitivity& s, int k);

/// Cofactor determinant of the branch-nondegeneracy matrix.
double det_M(const Parameters& p, const Sensitivity& s, int k);
/// The same determinant in completed-square form; negative by construction.
double det_M_closed_form(const Parameters& p, const Sensitivity& s, int k);
/// The branch-nondegeneracy matrix itself (rows: v-equation, w-equation, normalization).
Mat3 matrix_M(const Parameters& p, const Sensitivity& s, int k);

/// Projections of the O(s) correction onto the mean and onto cos(2 q x).
struct FirstOrderIntegrals {
    double mean_u, mean_v, mean_w;
    double double_u, double_v, double_w;
};

/// Diagnostics kept alongside each first-order solve.
struct FirstOrderSolve {
    FirstOrderIntegrals integrals;
    Mat3 mean_matrix, double_matrix;
    Vec3 mean_rhs, double_rhs;       // double_rhs = {M3, M4, w-row forcing}
    double mean_condition, double_condition;
    double mean_residual, double_residual;        // relative
    double mean_solver_gap, double_solver_gap;    // Cramer vs elimination, relative
};

FirstOrderSolve first_order_solve(const Parameters& p, const Sensitivity& s, int k);
FirstOrderIntegrals first_order_integrals(const Parameters& p, const Sensitivity& s, int k);

/// Projections of the O(s^2) correction onto cos(q x).
struct SecondOrderIntegrals {
    double u, v, w;
};

struct SecondOrderSolve {
    SecondOrderIntegrals integrals;
    double M1, M2;          // right-hand side of the v- and w-rows
    double u_forcing;       // same projection for the u-row, consumed by K2
    Mat3 matrix;
    double determinant;
    double residual;        // relative
    double solver_gap;
};

SecondOrderSolve second_order_solve(const Parameters& p, const Sensitivity& s, int k,
                                    const FirstOrderIntegrals& f);
SecondOrderIntegrals second_order_integrals(const Parameters& p, const Sensitivity& s, int k,
                                            const FirstOrderIntegrals& f);

struct K2Result {
    int k = 0;
    double chi_S = 0.0;
    double K2 = 0.0;
    ModeAmplitudes amplitudes{};
    FirstOrderSolve first{};
    SecondOrderSolve second{};
    double detM = 0.0;
};

/// Quadratic coefficient of chi_k(s) = chi_S_k + K2 s^2 + o(s^2) along the
/// steady branch normalized so the w-component is s cos(q x) + O(s^2).
K2Result compute_K2(const Parameters& p, const Sensitivity& s, int k);

/// Multi-line audit dump of every intermediate quantity.
std::string ledger_text(const K2Result& r);

enum class BranchKind { SteadyState, Hopf };
enum class BranchStability { Stable, Unstable, Undetermined, NotApplicable };
std::string_view to_string(BranchKind kind);
std::string_view to_string(BranchStability st);

struct BranchVerdict {
    int k;
    BranchKind kind;
    BranchStability stability;
    std::string reason;
};

/// Branch stability for k = 1..kmax, steady branches first then Hopf ones.
/// Throws DegenerateBranch when the leading thresholds coincide and
/// NotGroupDefense when phi(w_bar) > 0.
std::vector<BranchVerdict> branch_verdict(const Parameters& p, const Sensitivity& s, int kmax);

}  // namespace preytaxis
