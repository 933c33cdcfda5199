#pragma once

#include <array>
#include <string_view>

namespace preytaxis {

using Vec3 = std::array<double, 3>;
using Mat3 = std::array<Vec3, 3>;  // row-major: m[row][col]

double det3(const Mat3& m);
double trace3(const Mat3& m);
/// Sum of the three principal 2x2 minors.
double minor_sum3(const Mat3& m);
Vec3 mul(const Mat3& m, const Vec3& x);
double norm_inf(const Vec3& x);

/// 1-norm condition number, infinite when the matrix is exactly singular.
double condition_number(const Mat3& m);

struct LinearSolve {
    Vec3 cramer;       // closed-form determinant ratios
    Vec3 elimination;  // partial-pivoting Gaussian elimination
    double determinant;
    double condition;
};

/// Solves m x = rhs both ways. Throws SingularSystem (tagged with `label`)
/// when the condition number exceeds kMaxCondition.
LinearSolve solve3(const Mat3& m, const Vec3& rhs, std::string_view label);

Vec3 solve_cramer(const Mat3& m, const Vec3& rhs);
Vec3 solve_elimination(const Mat3& m, const Vec3& rhs);

inline constexpr double kMaxCondition = 1e12;

}  // namespace preytaxis
