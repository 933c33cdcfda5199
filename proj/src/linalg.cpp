#include "preytaxis/linalg.hpp"

#include "preytaxis/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

namespace preytaxis {

double det3(const Mat3& m) {
    return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
           m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
           m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

double trace3(const Mat3& m) { return m[0][0] + m[1][1] + m[2][2]; }

double minor_sum3(const Mat3& m) {
    return (m[0][0] * m[1][1] - m[0][1] * m[1][0]) + (m[0][0] * m[2][2] - m[0][2] * m[2][0]) +
           (m[1][1] * m[2][2] - m[1][2] * m[2][1]);
}

Vec3 mul(const Mat3& m, const Vec3& x) {
    Vec3 y{};
    for (int i = 0; i < 3; ++i) y[i] = m[i][0] * x[0] + m[i][1] * x[1] + m[i][2] * x[2];
    return y;
}

double norm_inf(const Vec3& x) {
    return std::max({std::abs(x[0]), std::abs(x[1]), std::abs(x[2])});
}

namespace {

double norm1(const Mat3& m) {
    double best = 0.0;
    for (int j = 0; j < 3; ++j)
        best = std::max(best, std::abs(m[0][j]) + std::abs(m[1][j]) + std::abs(m[2][j]));
    return best;
}

Mat3 adjugate(const Mat3& m) {
    Mat3 a{};
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            const int r0 = (j + 1) % 3, r1 = (j + 2) % 3;
            const int c0 = (i + 1) % 3, c1 = (i + 2) % 3;
            a[i][j] = m[r0][c0] * m[r1][c1] - m[r0][c1] * m[r1][c0];
        }
    }
    return a;
}

}  // namespace

double condition_number(const Mat3& m) {
    const double d = det3(m);
    if (d == 0.0) return std::numeric_limits<double>::infinity();
    return norm1(m) * norm1(adjugate(m)) / std::abs(d);
}

Vec3 solve_cramer(const Mat3& m, const Vec3& rhs) {
    const double d = det3(m);
    Vec3 x{};
    for (int col = 0; col < 3; ++col) {
        Mat3 mc = m;
        for (int row = 0; row < 3; ++row) mc[row][col] = rhs[row];
        x[col] = det3(mc) / d;
    }
    return x;
}

Vec3 solve_elimination(const Mat3& m, const Vec3& rhs) {
    Mat3 a = m;
    Vec3 b = rhs;
    for (int col = 0; col < 3; ++col) {
        int pivot = col;
        for (int row = col + 1; row < 3; ++row)
            if (std::abs(a[row][col]) > std::abs(a[pivot][col])) pivot = row;
        std::swap(a[col], a[pivot]);
        std::swap(b[col], b[pivot]);
        for (int row = col + 1; row < 3; ++row) {
            const double f = a[row][col] / a[col][col];
            for (int k = col; k < 3; ++k) a[row][k] -= f * a[col][k];
            b[row] -= f * b[col];
        }
    }
    Vec3 x{};
    for (int row = 2; row >= 0; --row) {
        double s = b[row];
        for (int k = row + 1; k < 3; ++k) s -= a[row][k] * x[k];
        x[row] = s / a[row][row];
    }
    return x;
}

LinearSolve solve3(const Mat3& m, const Vec3& rhs, std::string_view label) {
    const double cond = condition_number(m);
    if (!(cond <= kMaxCondition))
        throw Error(ErrorCode::SingularSystem,
                    std::string(label) + " (condition number " + std::to_string(cond) + ")");
    return {solve_cramer(m, rhs), solve_elimination(m, rhs), det3(m), cond};
}

}  // namespace preytaxis
