#include "preytaxis/stability.hpp"

#include "preytaxis/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace preytaxis {

namespace {

void require_mode(int k) {
    if (k < 1) throw Error(ErrorCode::ZeroMode, "threshold formulas need k >= 1, got " + std::to_string(k));
}

/// phi(w_bar), rejecting the vanishing case the threshold formulas divide by.
double phi_at_equilibrium(const Sensitivity& s, const Equilibrium& e) {
    const double phi = s(e.w_bar);
    if (phi == 0.0)
        throw Error(ErrorCode::SensitivityVanishesAtEquilibrium, "phi(w_bar) = 0");
    return phi;
}

// Magnitudes against which "within 1e-9 of zero" is judged.
struct EtaScales {
    double eta0, eta1, hurwitz;
};

EtaScales eta_scales(const Parameters& p, const Sensitivity& s, double chi, int k) {
    const Equilibrium e = equilibrium(p);
    const auto [H1, H2, H3, q2] = damping(p, e, k);
    const double phi = s(e.w_bar);
    const double taxis_u = std::abs(p.beta31 * e.u_bar * e.w_bar * phi * q2 * chi);
    const double taxis_v = std::abs(p.beta32 * e.v_bar * e.w_bar * phi * q2 * p.xi);
    const double kin = (p.beta31 * p.beta1 * e.u_bar + p.beta32 * p.beta2 * e.v_bar) * e.w_bar;
    const double s0 = H1 * H2 * H3 + H2 * p.beta31 * p.beta1 * e.u_bar * e.w_bar +
                      H1 * p.beta2 * p.beta32 * e.v_bar * e.w_bar + H2 * taxis_u + H1 * taxis_v;
    const double s1 = H1 * H2 + H1 * H3 + H2 * H3 + kin + taxis_u + taxis_v;
    const double s2 = H1 + H2 + H3;
    return {s0, s1, s1 * s2 + s0};
}

}  // namespace

std::string_view to_string(InstabilityKind kind) {
    switch (kind) {
    case InstabilityKind::SteadyState: return "SteadyState";
    case InstabilityKind::Hopf: return "Hopf";
    case InstabilityKind::Degenerate: return "Degenerate";
    case InstabilityKind::AlwaysStable: return "AlwaysStable";
    }
    return "?";
}

std::string_view to_string(RouthHurwitz c) {
    switch (c) {
    case RouthHurwitz::Eta0: return "eta0<0";
    case RouthHurwitz::Eta1: return "eta1<0";
    case RouthHurwitz::Hurwitz: return "eta1*eta2-eta0<0";
    }
    return "?";
}

double wavenumber_sq(const Parameters& p, int k) {
    const double q = k * std::numbers::pi / p.L;
    return q * q;
}

Damping damping(const Parameters& p, const Equilibrium& e, int k) {
    const double q2 = wavenumber_sq(p, k);
    return {p.d1 * q2 + p.alpha1 * e.u_bar, p.d2 * q2 + p.alpha2 * e.v_bar,
            p.d3 * q2 + p.alpha3 * e.w_bar, q2};
}

Mat3 stability_matrix(const Parameters& p, const Sensitivity& s, double chi, int k) {
    const Equilibrium e = equilibrium(p);
    const auto [H1, H2, H3, q2] = damping(p, e, k);
    const double phi = s(e.w_bar);
    return Mat3{{
        {-H1, 0.0, chi * e.u_bar * phi * q2 + p.beta1 * e.u_bar},
        {0.0, -H2, p.xi * e.v_bar * phi * q2 + p.beta2 * e.v_bar},
        {-p.beta31 * e.w_bar, -p.beta32 * e.w_bar, -H3},
    }};
}

EtaCoefficients eta(const Parameters& p, const Sensitivity& s, double chi, int k) {
    const Equilibrium e = equilibrium(p);
    const auto [H1, H2, H3, q2] = damping(p, e, k);
    const double phi = s(e.w_bar);
    const double ub = e.u_bar, vb = e.v_bar, wb = e.w_bar;

    const double eta2 = H1 + H2 + H3;
    const double eta1 = H1 * H2 + H1 * H3 + H2 * H3 +
                        (p.beta31 * p.beta1 * ub + p.beta32 * p.beta2 * vb) * wb +
                        (p.beta31 * ub * chi + p.beta32 * vb * p.xi) * wb * phi * q2;
    const double eta0 = H1 * H2 * H3 + H2 * p.beta31 * p.beta1 * ub * wb +
                        H1 * p.beta2 * p.beta32 * vb * wb +
                        H2 * p.beta31 * ub * wb * phi * q2 * chi +
                        H1 * p.beta32 * vb * wb * phi * q2 * p.xi;
    return {eta0, eta1, eta2};
}

EtaCoefficients eta_from_matrix(const Mat3& m) {
    return {-det3(m), minor_sum3(m), -trace3(m)};
}

double chi_S(const Parameters& p, const Sensitivity& s, int k) {
    require_mode(k);
    const Equilibrium e = equilibrium(p);
    const double phi = phi_at_equilibrium(s, e);
    const auto [H1, H2, H3, q2] = damping(p, e, k);
    const double ub = e.u_bar, vb = e.v_bar, wb = e.w_bar;
    return -p.beta32 * vb * H1 / (p.beta31 * ub * H2) * p.xi -
           (H1 * H2 * H3 + H2 * p.beta31 * p.beta1 * ub * wb + H1 * p.beta32 * p.beta2 * vb * wb) /
               (H2 * p.beta31 * ub * wb * phi * q2);
}

double chi_H(const Parameters& p, const Sensitivity& s, int k) {
    require_mode(k);
    const Equilibrium e = equilibrium(p);
    const double phi = phi_at_equilibrium(s, e);
    const auto [H1, H2, H3, q2] = damping(p, e, k);
    const double ub = e.u_bar, vb = e.v_bar, wb = e.w_bar;
    const double H13 = H1 + H3, H23 = H2 + H3;
    const double cubic = H1 * H1 * H2 + H1 * H2 * H2 + H1 * H1 * H3 + H1 * H3 * H3 + H2 * H2 * H3 +
                         H2 * H3 * H3 + 2.0 * H1 * H2 * H3;
    return -cubic / (H13 * p.beta31 * ub * wb * phi * q2) -
           (H13 * p.beta31 * p.beta1 * ub + H23 * p.beta32 * p.beta2 * vb) /
               (H13 * p.beta31 * ub * phi * q2) -
           H23 * p.beta32 * vb / (H13 * p.beta31 * ub) * p.xi;
}

double chi_M(const Parameters& p, const Sensitivity& s, int k) {
    require_mode(k);
    const Equilibrium e = equilibrium(p);
    const double phi = phi_at_equilibrium(s, e);
    const auto [H1, H2, H3, q2] = damping(p, e, k);
    const double ub = e.u_bar, vb = e.v_bar, wb = e.w_bar;
    return -(H1 * H2 + H1 * H3 + H2 * H3) / (p.beta31 * ub * wb * phi * q2) -
           (p.xi * p.beta32 * vb * phi * q2 + p.beta32 * p.beta2 * vb + p.beta31 * p.beta1 * ub) /
               (p.beta31 * ub * phi * q2);
}

ThresholdTable chi_zero(const Parameters& p, const Sensitivity& s, int kmax, double degeneracy_tol) {
    if (kmax < 1) throw Error(ErrorCode::ZeroMode, "kmax must be >= 1");
    const Equilibrium e = equilibrium(p);
    const double phi = phi_at_equilibrium(s, e);

    ThresholdTable table;
    table.rows.reserve(static_cast<std::size_t>(kmax));
    for (int k = 1; k <= kmax; ++k)
        table.rows.push_back({k, chi_S(p, s, k), chi_H(p, s, k), chi_M(p, s, k)});

    if (phi > 0.0) {
        // Every threshold is negative: any chi > 0 is stabilizing.
        table.kind = InstabilityKind::AlwaysStable;
        table.chi0 = -std::numeric_limits<double>::infinity();
        table.k_star = 0;
        return table;
    }

    auto best_s = table.rows.begin(), best_h = table.rows.begin();
    for (auto it = table.rows.begin(); it != table.rows.end(); ++it) {
        if (it->chi_S < best_s->chi_S) best_s = it;
        if (it->chi_H < best_h->chi_H) best_h = it;
    }
    const double min_s = best_s->chi_S, min_h = best_h->chi_H;
    const double scale = std::max(std::abs(min_s), std::abs(min_h));
    if (std::abs(min_s - min_h) <= degeneracy_tol * scale) {
        table.kind = InstabilityKind::Degenerate;
        table.chi0 = std::min(min_s, min_h);
        table.k_star = min_s <= min_h ? best_s->k : best_h->k;
    } else if (min_s < min_h) {
        table.kind = InstabilityKind::SteadyState;
        table.chi0 = min_s;
        table.k_star = best_s->k;
    } else {
        table.kind = InstabilityKind::Hopf;
        table.chi0 = min_h;
        table.k_star = best_h->k;
    }
    return table;
}

int tail_kmax(const Parameters& p, const Sensitivity& s) {
    constexpr int kFloor = 30;
    constexpr int kCap = 1'000'000;
    const Equilibrium e = equilibrium(p);
    if (phi_at_equilibrium(s, e) > 0.0) return kFloor;

    double running_min = std::numeric_limits<double>::infinity();
    double prev_s = 0.0, prev_h = 0.0;
    int increasing = 0;
    for (int k = 1; k <= kCap; ++k) {
        const double cs = chi_S(p, s, k), ch = chi_H(p, s, k);
        running_min = std::min({running_min, cs, ch});
        increasing = (k > 1 && cs > prev_s && ch > prev_h) ? increasing + 1 : 0;
        prev_s = cs;
        prev_h = ch;
        if (k >= kFloor && increasing >= 5 && cs > 10.0 * running_min && ch > 10.0 * running_min)
            return k;
    }
    return kCap;
}

ThresholdTable chi_zero(const Parameters& p, const Sensitivity& s) {
    return chi_zero(p, s, tail_kmax(p, s));
}

StabilityVerdict is_stable(const Parameters& p, const Sensitivity& s, double chi, int kmax) {
    constexpr double kMarginal = 1e-9;
    const double phi = s(equilibrium(p).w_bar);

    bool marginal = false;
    StabilityVerdict marginal_verdict{StabilityVerdict::Status::Marginal};
    StabilityVerdict worst{StabilityVerdict::Status::Stable};
    double worst_threshold = std::numeric_limits<double>::infinity();

    auto threshold_of = [&](int k, RouthHurwitz c) {
        if (k == 0 || phi == 0.0) return -std::numeric_limits<double>::infinity();
        switch (c) {
        case RouthHurwitz::Eta0: return chi_S(p, s, k);
        case RouthHurwitz::Eta1: return chi_M(p, s, k);
        case RouthHurwitz::Hurwitz: return chi_H(p, s, k);
        }
        return 0.0;
    };

    for (int k = 0; k <= kmax; ++k) {
        const EtaCoefficients c = eta(p, s, chi, k);
        const EtaScales sc = eta_scales(p, s, chi, k);
        const std::pair<double, double> checks[] = {
            {c.eta0, sc.eta0}, {c.eta1, sc.eta1}, {c.hurwitz(), sc.hurwitz}};
        const RouthHurwitz names[] = {RouthHurwitz::Eta0, RouthHurwitz::Eta1, RouthHurwitz::Hurwitz};
        for (int i = 0; i < 3; ++i) {
            const auto [value, scale] = checks[i];
            if (std::abs(value) <= kMarginal * std::max(scale, 1.0)) {
                if (!marginal) marginal_verdict = {StabilityVerdict::Status::Marginal, k, names[i]};
                marginal = true;
            } else if (value < 0.0) {
                const double t = threshold_of(k, names[i]);
                if (worst.status == StabilityVerdict::Status::Stable || t < worst_threshold) {
                    worst = {StabilityVerdict::Status::Unstable, k, names[i]};
                    worst_threshold = t;
                }
            }
        }
    }
    if (worst.status == StabilityVerdict::Status::Unstable) return worst;
    if (marginal) return marginal_verdict;
    return worst;
}

EigenTriple cubic_roots(const EtaCoefficients& c) {
    using cd = std::complex<double>;
    const double a = c.eta2, b = c.eta1, d = c.eta0;
    // sigma = y - a/3 turns the cubic into y^3 + P y + Q = 0.
    const double P = b - a * a / 3.0;
    const double Q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + d;
    const double disc = 0.25 * Q * Q + P * P * P / 27.0;
    const double shift = -a / 3.0;

    EigenTriple roots;
    if (disc > 0.0) {
        const double sq = std::sqrt(disc);
        // Pick the larger-magnitude branch to avoid cancellation.
        const double A = std::cbrt(-0.5 * Q + (Q <= 0 ? sq : -sq));
        const double B = A == 0.0 ? 0.0 : -P / (3.0 * A);
        const double re = -0.5 * (A + B);
        const double im = 0.5 * std::sqrt(3.0) * (A - B);
        roots = {cd(A + B + shift, 0.0), cd(re + shift, im), cd(re + shift, -im)};
    } else if (P == 0.0) {
        roots = {cd(shift), cd(shift), cd(shift)};
    } else {
        const double r = 2.0 * std::sqrt(-P / 3.0);
        const double arg = std::clamp(3.0 * Q / (P * r), -1.0, 1.0);
        const double theta = std::acos(arg) / 3.0;
        for (int j = 0; j < 3; ++j)
            roots[static_cast<std::size_t>(j)] =
                cd(r * std::cos(theta - 2.0 * std::numbers::pi * j / 3.0) + shift, 0.0);
    }

    // One Newton polish per root on the original cubic.
    for (auto& z : roots) {
        const cd f = ((z + a) * z + b) * z + d;
        const cd df = (3.0 * z + 2.0 * a) * z + b;
        if (std::abs(df) > 0.0) {
            const cd next = z - f / df;
            const cd fn = ((next + a) * next + b) * next + d;
            if (std::abs(fn) <= std::abs(f)) z = next;
        }
    }
    std::sort(roots.begin(), roots.end(), [](const cd& x, const cd& y) {
        if (x.real() != y.real()) return x.real() > y.real();
        return x.imag() > y.imag();
    });
    return roots;
}

EigenTriple eigenvalues(const Mat3& m) { return cubic_roots(eta_from_matrix(m)); }

HopfFrequency hopf_frequency(const Parameters& p, const Sensitivity& s, int k) {
    const double chi = chi_H(p, s, k);
    const double e1 = eta(p, s, chi, k).eta1;
    if (!(e1 > 0.0))
        throw Error(ErrorCode::NotAHopfPoint,
                    "eta1(chi_H_k, k) <= 0 at k = " + std::to_string(k) + " (chi_S_k < chi_H_k)");
    const double tau0 = std::sqrt(e1);
    return {tau0, 2.0 * std::numbers::pi / tau0};
}

Transversality transversality(const Parameters& p, const Sensitivity& s, int k) {
    const double tau0 = hopf_frequency(p, s, k).tau0;
    const Equilibrium e = equilibrium(p);
    const auto [H1, H2, H3, q2] = damping(p, e, k);
    const double eta2 = H1 + H2 + H3;
    const double taxis = p.beta31 * e.w_bar * e.u_bar * s(e.w_bar) * q2;
    const double sigma1_prime = taxis * (H1 + H3) / (tau0 * tau0 + eta2 * eta2);
    return {sigma1_prime, -0.5 * sigma1_prime};
}

}  // namespace preytaxis
