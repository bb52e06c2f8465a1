#pragma once

#include <array>
#include <cmath>

#include "ym/geometry.hpp"

namespace ym {

/// Value in the 3-dimensional Lie algebra of the structure group (su(2) ~ so(3))
/// in a fixed orthonormal basis. The bracket is the cross product.
struct LieValue {
    std::array<double, 3> c{};

    double& operator[](int i) { return c[i]; }
    double operator[](int i) const { return c[i]; }

    LieValue& operator+=(const LieValue& o) {
        for (int i = 0; i < 3; ++i) c[i] += o.c[i];
        return *this;
    }
    LieValue& operator-=(const LieValue& o) {
        for (int i = 0; i < 3; ++i) c[i] -= o.c[i];
        return *this;
    }
    LieValue& operator*=(double s) {
        for (int i = 0; i < 3; ++i) c[i] *= s;
        return *this;
    }
    friend LieValue operator+(LieValue x, const LieValue& y) { return x += y; }
    friend LieValue operator-(LieValue x, const LieValue& y) { return x -= y; }
    friend LieValue operator*(double s, LieValue x) { return x *= s; }
    LieValue operator-() const { return {-c[0], -c[1], -c[2]}; }

    double dot(const LieValue& o) const { return c[0] * o.c[0] + c[1] * o.c[1] + c[2] * o.c[2]; }
    double norm2() const { return dot(*this); }
    double norm() const { return std::sqrt(norm2()); }
};

/// [u, v] with structure constants eps_abc.
inline LieValue bracket(const LieValue& u, const LieValue& v) {
    return {u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]};
}

/// 3x3 real matrix, used for SO(3) transports and small Gram algebra.
struct Mat3 {
    std::array<double, 9> m{}; // row-major

    static Mat3 identity() {
        Mat3 r;
        r.m = {1, 0, 0, 0, 1, 0, 0, 0, 1};
        return r;
    }
    double& at(int i, int j) { return m[3 * i + j]; }
    double at(int i, int j) const { return m[3 * i + j]; }

    std::array<double, 3> apply(const std::array<double, 3>& v) const {
        std::array<double, 3> r{};
        for (int i = 0; i < 3; ++i)
            r[i] = m[3 * i] * v[0] + m[3 * i + 1] * v[1] + m[3 * i + 2] * v[2];
        return r;
    }
    LieValue apply(const LieValue& v) const { return LieValue{apply(v.c)}; }
    Mat3 transposed() const {
        Mat3 r;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) r.at(i, j) = at(j, i);
        return r;
    }
    friend Mat3 operator*(const Mat3& a, const Mat3& b) {
        Mat3 r;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                double s = 0;
                for (int k = 0; k < 3; ++k) s += a.at(i, k) * b.at(k, j);
                r.at(i, j) = s;
            }
        return r;
    }
    friend Mat3 operator+(const Mat3& a, const Mat3& b) {
        Mat3 r;
        for (int i = 0; i < 9; ++i) r.m[i] = a.m[i] + b.m[i];
        return r;
    }
    friend Mat3 operator*(double s, const Mat3& a) {
        Mat3 r;
        for (int i = 0; i < 9; ++i) r.m[i] = s * a.m[i];
        return r;
    }
    double maxAbs() const {
        double r = 0;
        for (double x : m) r = std::max(r, std::abs(x));
        return r;
    }
};

/// exp of the so(3) element with axis-angle vector w (Rodrigues).
Mat3 so3Exp(const LieValue& w);
/// Inverse of so3Exp for rotations not at angle pi; returns axis-angle vector.
LieValue so3Log(const Mat3& R);
/// Nearest orthogonal matrix (two Newton sweeps of the polar iteration).
Mat3 orthogonalize(const Mat3& R);

/// Jacobi eigendecomposition of a symmetric k x k matrix (k small, row-major).
/// Deterministic sweep order. Eigenvalues ascending, `vecs` columns matching.
void jacobiEigenSym(int k, const double* a, double* vals, double* vecs);

} // namespace ym
