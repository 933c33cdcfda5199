#include "oracles.hpp"

#include <Eigen/Dense>
#include <boost/numeric/odeint.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <stdexcept>

namespace oracle {

pt::Parameters table1_params() {
    pt::Parameters p;
    p.d1 = 0.1, p.d2 = 2.0, p.d3 = 0.1;
    p.alpha1 = 0.5, p.alpha2 = 2.0, p.alpha3 = 1.0;
    p.beta1 = 0.5, p.beta2 = 0.5, p.beta31 = 0.1, p.beta32 = 0.1;
    p.chi = 8.0, p.xi = 0.5, p.L = 7.0;
    return p;
}

pt::Sensitivity table1_sensitivity() { return pt::Sensitivity{0.0, 0.1, -1.0}; }

pt::Parameters table3_params() {
    pt::Parameters p;
    p.d1 = 1.0, p.d2 = 0.01, p.d3 = 1.0;
    p.alpha1 = 0.02, p.alpha2 = 0.04, p.alpha3 = 8.0;
    p.beta1 = 0.05, p.beta2 = 0.5, p.beta31 = 0.5, p.beta32 = 0.5;
    p.chi = 120.0, p.xi = 0.05, p.L = 7.0;
    return p;
}

pt::Sensitivity table3_sensitivity() { return pt::Sensitivity{0.0, 0.1, -1.0}; }

pt::Parameters fig6_params() {
    pt::Parameters p;
    p.d1 = 5.0, p.d2 = 0.5, p.d3 = 1.0;
    p.alpha1 = 0.05, p.alpha2 = 0.05, p.alpha3 = 4.0;
    p.beta1 = 0.3, p.beta2 = 0.5, p.beta31 = 1.0, p.beta32 = 1.0 / 3.0;
    p.chi = 3000.0, p.xi = 0.1, p.L = 7.0;
    return p;
}

std::string config_path(std::string_view name) {
    const char* dir = std::getenv("PREYTAXIS_CONFIGS");
    return std::string(dir && *dir ? dir : "configs") + "/" + std::string(name);
}

Draw random_group_defense(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    auto log_uniform = [&](double lo, double hi) { return lo * std::pow(hi / lo, unit(rng)); };
    pt::Parameters p;
    p.d1 = log_uniform(0.01, 5.0);
    p.d2 = log_uniform(0.01, 5.0);
    p.d3 = log_uniform(0.01, 5.0);
    p.alpha1 = log_uniform(0.02, 2.0);
    p.alpha2 = log_uniform(0.02, 2.0);
    p.alpha3 = log_uniform(0.5, 10.0);
    p.beta1 = log_uniform(0.02, 1.0);
    p.beta2 = log_uniform(0.02, 1.0);
    p.beta31 = p.alpha3 * (0.05 + 0.4 * unit(rng));
    p.beta32 = p.alpha3 * (0.05 + 0.4 * unit(rng));
    p.xi = unit(rng);
    p.chi = 0.0;
    p.L = 1.0 + 19.0 * unit(rng);

    // Equilibrium prey level, written out independently of the library.
    const double wb = (p.alpha3 - p.beta31 - p.beta32) /
                      (p.alpha3 + p.beta1 * p.beta31 / p.alpha1 + p.beta2 * p.beta32 / p.alpha2);
    const double c = 0.5 + 1.5 * unit(rng);
    const double root = wb * (0.1 + 0.8 * unit(rng));  // root below w_bar: phi(w_bar) < 0
    return {p, pt::Sensitivity::product_form(c, root)};
}

double det_leibniz(const pt::Mat3& m) {
    static constexpr int perms[6][3] = {{0, 1, 2}, {1, 2, 0}, {2, 0, 1}, {0, 2, 1}, {2, 1, 0}, {1, 0, 2}};
    double d = 0.0;
    for (int i = 0; i < 6; ++i) {
        const double sign = i < 3 ? 1.0 : -1.0;
        d += sign * m[0][perms[i][0]] * m[1][perms[i][1]] * m[2][perms[i][2]];
    }
    return d;
}

double bisect(const std::function<double(double)>& f, double lo, double hi, double rel_tol) {
    double flo = f(lo);
    if (flo * f(hi) > 0.0) throw std::runtime_error("bisect: no sign change");
    for (int i = 0; i < 400 && hi - lo > rel_tol * std::max(std::abs(lo), std::abs(hi)); ++i) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((fm < 0.0) == (flo < 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

std::array<std::complex<double>, 3> dense_eigenvalues(const pt::Mat3& m) {
    Eigen::Matrix3d a;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) a(i, j) = m[i][j];
    const Eigen::EigenSolver<Eigen::Matrix3d> es(a, false);
    std::array<std::complex<double>, 3> ev{es.eigenvalues()(0), es.eigenvalues()(1), es.eigenvalues()(2)};
    std::sort(ev.begin(), ev.end(), [](auto x, auto y) {
        if (x.real() != y.real()) return x.real() > y.real();
        return x.imag() > y.imag();
    });
    return ev;
}

pt::Vec3 null_vector(const pt::Mat3& m) {
    auto cross = [](const pt::Vec3& a, const pt::Vec3& b) {
        return pt::Vec3{a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
    };
    pt::Vec3 best{};
    double best_norm = -1.0;
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j) {
            const pt::Vec3 c = cross(m[i], m[j]);
            const double nrm = std::abs(c[0]) + std::abs(c[1]) + std::abs(c[2]);
            if (nrm > best_norm) {
                best_norm = nrm;
                best = c;
            }
        }
    return {best[0] / best[2], best[1] / best[2], 1.0};
}

std::vector<std::array<double, 3>> kinetics_trajectory(const pt::Parameters& p, std::array<double, 3> y0,
                                                       const std::vector<double>& times, double tol) {
    namespace ode = boost::numeric::odeint;
    using State = std::array<double, 3>;
    auto f = [&p](const State& y, State& dy, double) {
        dy[0] = p.alpha1 * (1.0 - y[0]) * y[0] + p.beta1 * y[0] * y[2];
        dy[1] = p.alpha2 * (1.0 - y[1]) * y[1] + p.beta2 * y[1] * y[2];
        dy[2] = p.alpha3 * (1.0 - y[2]) * y[2] - p.beta31 * y[0] * y[2] - p.beta32 * y[1] * y[2];
    };
    std::vector<State> out;
    out.reserve(times.size());
    auto observer = [&out](const State& y, double) { out.push_back(y); };
    auto stepper = ode::make_dense_output(tol, tol, ode::runge_kutta_dopri5<State>());
    ode::integrate_times(stepper, f, y0, times.begin(), times.end(), 1e-3, observer);
    return out;
}

namespace {

/// Steady residual of the cell-centered flux discretization at taxis chi.
Eigen::VectorXd steady_residual(const pt::Parameters& p, const pt::Sensitivity& s, int n, const Eigen::VectorXd& z) {
    const double h = p.L / n, chi = z[3 * n];
    Eigen::VectorXd r(3 * n);
    auto u = [&](int i) { return z[i]; };
    auto v = [&](int i) { return z[n + i]; };
    auto w = [&](int i) { return z[2 * n + i]; };
    std::vector<double> fu(n + 1, 0.0), fv(n + 1, 0.0), fw(n + 1, 0.0);
    for (int i = 1; i < n; ++i) {
        const double wm = 0.5 * (w(i - 1) + w(i)), gw = (w(i) - w(i - 1)) / h;
        const double ph = s(wm);
        fu[i] = p.d1 * (u(i) - u(i - 1)) / h - chi * 0.5 * (u(i - 1) + u(i)) * ph * gw;
        fv[i] = p.d2 * (v(i) - v(i - 1)) / h - p.xi * 0.5 * (v(i - 1) + v(i)) * ph * gw;
        fw[i] = p.d3 * gw;
    }
    for (int i = 0; i < n; ++i) {
        r[i] = (fu[i + 1] - fu[i]) / h + p.alpha1 * (1 - u(i)) * u(i) + p.beta1 * u(i) * w(i);
        r[n + i] = (fv[i + 1] - fv[i]) / h + p.alpha2 * (1 - v(i)) * v(i) + p.beta2 * v(i) * w(i);
        r[2 * n + i] = (fw[i + 1] - fw[i]) / h + p.alpha3 * (1 - w(i)) * w(i) - p.beta31 * u(i) * w(i) -
                       p.beta32 * v(i) * w(i);
    }
    return r;
}

}  // namespace

BranchPoint steady_branch_point(const pt::Parameters& p, const pt::Sensitivity& s, int k, int n, double amp,
                                double chi_guess, double P, double Q) {
    const pt::Equilibrium e = pt::equilibrium(p);
    const double h = p.L / n;
    Eigen::VectorXd cs(n);
    for (int i = 0; i < n; ++i) cs[i] = std::cos(k * std::numbers::pi * (i + 0.5) * h / p.L);

    const int m = 3 * n + 1;
    Eigen::VectorXd z(m);
    for (int i = 0; i < n; ++i) {
        z[i] = e.u_bar + amp * P * cs[i];
        z[n + i] = e.v_bar + amp * Q * cs[i];
        z[2 * n + i] = e.w_bar + amp * cs[i];
    }
    z[3 * n] = chi_guess;

    auto F = [&](const Eigen::VectorXd& y) {
        Eigen::VectorXd f(m);
        f.head(3 * n) = steady_residual(p, s, n, y);
        f[3 * n] = (y.segment(2 * n, n).array() - e.w_bar).matrix().dot(cs) * h - amp * p.L / 2.0;
        return f;
    };

    for (int it = 0; it < 40; ++it) {
        const Eigen::VectorXd f0 = F(z);
        Eigen::MatrixXd J(m, m);
        for (int j = 0; j < m; ++j) {
            const double eps = 1e-7 * std::max(1.0, std::abs(z[j]));
            Eigen::VectorXd zp = z;
            zp[j] += eps;
            J.col(j) = (F(zp) - f0) / eps;
        }
        const Eigen::VectorXd dz = J.partialPivLu().solve(-f0);
        z += dz;
        if (dz.lpNorm<Eigen::Infinity>() < 1e-12) break;
    }
    BranchPoint bp;
    bp.chi = z[3 * n];
    bp.u.assign(z.data(), z.data() + n);
    bp.v.assign(z.data() + n, z.data() + 2 * n);
    bp.w.assign(z.data() + 2 * n, z.data() + 3 * n);
    return bp;
}

BranchFit fit_branch(const pt::Parameters& p, const pt::Sensitivity& s, int k, int n,
                     const std::array<double, 3>& amps, double chi_guess, double P, double Q) {
    Eigen::Matrix3d A;
    Eigen::Vector3d b;
    for (int i = 0; i < 3; ++i) {
        const double a2 = amps[i] * amps[i];
        A(i, 0) = 1.0;
        A(i, 1) = a2;
        A(i, 2) = a2 * a2;
        b[i] = steady_branch_point(p, s, k, n, amps[i], chi_guess, P, Q).chi;
    }
    const Eigen::Vector3d c = A.fullPivLu().solve(b);
    return {c[0], c[1], c[2]};
}

}  // namespace oracle
