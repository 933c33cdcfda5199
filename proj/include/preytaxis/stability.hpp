#pragma once

#include "preytaxis/linalg.hpp"
#include "preytaxis/model.hpp"

#include <array>
#include <complex>
#include <string_view>
#include <vector>

namespace preytaxis {

/// Squared wave number (k pi / L)^2 of the Neumann mode cos(k pi x / L).
double wavenumber_sq(const Parameters& p, int k);

/// Diagonal damping magnitudes of the mode-k linearization.
struct Damping {
    double H1, H2, H3, q2;
};
Damping damping(const Parameters& p, const Equilibrium& e, int k);

/// Mode-k linearization about the constant equilibrium for taxis strength chi.
Mat3 stability_matrix(const Parameters& p, const Sensitivity& s, double chi, int k);

/// Coefficients of sigma^3 + eta2 sigma^2 + eta1 sigma + eta0 = 0.
struct EtaCoefficients {
    double eta0, eta1, eta2;
    double hurwitz() const { return eta1 * eta2 - eta0; }
};

/// Closed-form characteristic coefficients.
EtaCoefficients eta(const Parameters& p, const Sensitivity& s, double chi, int k);
/// Same coefficients from the matrix invariants (-det, minor sum, -trace).
EtaCoefficients eta_from_matrix(const Mat3& m);

// Closed-form thresholds (k >= 1). All throw ZeroMode for k < 1 and
// SensitivityVanishesAtEquilibrium when phi(w_bar) == 0.
double chi_S(const Parameters& p, const Sensitivity& s, int k);  // root of eta0
double chi_H(const Parameters& p, const Sensitivity& s, int k);  // root of eta1 eta2 - eta0
double chi_M(const Parameters& p, const Sensitivity& s, int k);  // root of eta1

enum class InstabilityKind { SteadyState, Hopf, Degenerate, AlwaysStable };
std::string_view to_string(InstabilityKind kind);

struct ThresholdRow {
    int k;
    double chi_S, chi_H, chi_M;
};

struct ThresholdTable {
    std::vector<ThresholdRow> rows;
    double chi0 = 0.0;
    int k_star = 0;
    InstabilityKind kind = InstabilityKind::SteadyState;
};

inline constexpr double kDegeneracyTolerance = 1e-6;

/// Thresholds for k = 1..kmax and their minimum. With phi(w_bar) > 0 every
/// threshold is negative and the table reports AlwaysStable.
ThresholdTable chi_zero(const Parameters& p, const Sensitivity& s, int kmax,
                        double degeneracy_tol = kDegeneracyTolerance);

/// Smallest kmax >= 30 past which neither threshold can undercut the running
/// minimum: both increasing for 5 consecutive modes and above 10x the minimum.
int tail_kmax(const Parameters& p, const Sensitivity& s);

/// chi_zero with kmax chosen by tail_kmax.
ThresholdTable chi_zero(const Parameters& p, const Sensitivity& s);

enum class RouthHurwitz { Eta0, Eta1, Hurwitz };
std::string_view to_string(RouthHurwitz c);

struct StabilityVerdict {
    enum class Status { Stable, Unstable, Marginal } status;
    int k = -1;                             // offending mode (Unstable/Marginal)
    RouthHurwitz condition = RouthHurwitz::Eta0;
};

/// Routh-Hurwitz sweep over k = 0..kmax. An unstable verdict names the
/// violated (mode, condition) whose threshold in chi is lowest, i.e. the
/// first one crossed as chi increases.
StabilityVerdict is_stable(const Parameters& p, const Sensitivity& s, double chi, int kmax);

using EigenTriple = std::array<std::complex<double>, 3>;

/// Roots of the characteristic cubic of `m`, sorted by descending real part
/// then descending imaginary part.
EigenTriple eigenvalues(const Mat3& m);
EigenTriple cubic_roots(const EtaCoefficients& c);

struct HopfFrequency {
    double tau0;
    double period;  // 2 pi / tau0
};

/// Throws NotAHopfPoint when eta1(chi_H_k, k) <= 0.
HopfFrequency hopf_frequency(const Parameters& p, const Sensitivity& s, int k);

struct Transversality {
    double sigma1_prime;  // d sigma1 / d chi at chi_H_k, negative
    double lambda_prime;  // d Re(sigma_{2,3}) / d chi at chi_H_k, positive
};

Transversality transversality(const Parameters& p, const Sensitivity& s, int k);

}  // namespace preytaxis
