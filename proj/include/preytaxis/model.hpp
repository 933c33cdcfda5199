#pragma once

#include <array>
#include <cstddef>
#include <initializer_list>
#include <string>
#include <vector>

namespace preytaxis {

/// Rate constants of the two-predator/one-prey prey-taxis system on (0, L).
///
///   u_t = (d1 u' - chi u phi(w) w')' + alpha1 (1-u) u + beta1 u w
///   v_t = (d2 v' - xi  v phi(w) w')' + alpha2 (1-v) v + beta2 v w
///   w_t =  d3 w''                    + alpha3 (1-w) w - beta31 u w - beta32 v w
///
/// with homogeneous Neumann boundaries. chi is the bifurcation parameter.
struct Parameters {
    double d1 = 0, d2 = 0, d3 = 0;
    double alpha1 = 0, alpha2 = 0, alpha3 = 0;
    double beta1 = 0, beta2 = 0;
    double beta31 = 0, beta32 = 0;
    double chi = 0, xi = 0;
    double L = 0;

    /// alpha3 > beta31 + beta32: the positive constant equilibrium exists.
    bool coexistence() const { return alpha3 > beta31 + beta32; }
};

/// Throws NonPositiveParameter naming the first offending field.
/// Failed coexistence is not an error; query Parameters::coexistence().
Parameters validate_parameters(const Parameters& raw);

/// Prey-dependent taxis sensitivity phi(w), a polynomial of degree <= 4.
class Sensitivity {
public:
    static constexpr std::size_t kMaxDegree = 4;

    Sensitivity() = default;
    /// Coefficients in ascending powers of w; at most five entries.
    explicit Sensitivity(std::vector<double> coefficients);
    Sensitivity(std::initializer_list<double> coefficients)
        : Sensitivity(std::vector<double>(coefficients)) {}

    /// phi(w) = c * w * (a - w).
    static Sensitivity product_form(double c, double a);

    struct Values {
        double phi, dphi, ddphi;
    };
    Values eval(double w) const;
    double operator()(double w) const { return eval(w).phi; }

    const std::array<double, kMaxDegree + 1>& coefficients() const { return c_; }

private:
    std::array<double, kMaxDegree + 1> c_{};
};

inline Sensitivity::Values sensitivity_eval(const Sensitivity& s, double w) { return s.eval(w); }

struct Equilibrium {
    double u_bar, v_bar, w_bar;
};

/// The positive constant state. Throws NoPositiveEquilibrium unless coexistence holds.
Equilibrium equilibrium(const Parameters& p);

struct Rates {
    double f1, f2, f3;
};

Rates kinetics(const Parameters& p, double u, double v, double w);

}  // namespace preytaxis
