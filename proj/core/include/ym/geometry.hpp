#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

#include "ym/errors.hpp"

namespace ym {

inline constexpr int kMaxDim = 8;

/// Point/vector in R^n, n <= 8. Fixed capacity keeps hot loops allocation-free.
struct Vec {
    std::array<double, kMaxDim> a{};
    int n = 0;

    Vec() = default;
    Vec(std::initializer_list<double> xs) {
        n = static_cast<int>(xs.size());
        int i = 0;
        for (double x : xs) a[i++] = x;
    }
    static Vec zero(int dim) {
        Vec v;
        v.n = dim;
        return v;
    }
    static Vec axis(int dim, int k, double s = 1.0) {
        Vec v = zero(dim);
        v.a[k] = s;
        return v;
    }
    double& operator[](int i) { return a[i]; }
    double operator[](int i) const { return a[i]; }

    Vec& operator+=(const Vec& o) {
        for (int i = 0; i < n; ++i) a[i] += o.a[i];
        return *this;
    }
    Vec& operator-=(const Vec& o) {
        for (int i = 0; i < n; ++i) a[i] -= o.a[i];
        return *this;
    }
    Vec& operator*=(double s) {
        for (int i = 0; i < n; ++i) a[i] *= s;
        return *this;
    }
    friend Vec operator+(Vec x, const Vec& y) { return x += y; }
    friend Vec operator-(Vec x, const Vec& y) { return x -= y; }
    friend Vec operator*(double s, Vec x) { return x *= s; }

    double dot(const Vec& o) const {
        double s = 0;
        for (int i = 0; i < n; ++i) s += a[i] * o.a[i];
        return s;
    }
    double norm2() const { return dot(*this); }
    double norm() const { return std::sqrt(norm2()); }
    double dist(const Vec& o) const { return (*this - o).norm(); }
};

/// Lexicographic order on coordinates; the deterministic tie-break used everywhere.
inline bool lexLess(const Vec& x, const Vec& y) {
    for (int i = 0; i < x.n; ++i) {
        if (x.a[i] < y.a[i]) return true;
        if (x.a[i] > y.a[i]) return false;
    }
    return false;
}

struct Ball {
    Vec center;
    double radius = 0;
    bool contains(const Vec& x) const { return x.dist(center) <= radius; }
    Ball dilated(double f) const { return {center, radius * f}; }
};

/// Affine (n-4)-plane: basepoint plus an orthonormal basis of the tangent
/// directions, with the orthonormal 4-dim complement cached alongside.
class Plane {
public:
    Plane() = default;
    Plane(Vec base, std::vector<Vec> basis);

    static Plane point(Vec base) { return Plane(base, {}); }
    /// Axis-aligned plane spanned by coordinate axes [0, dim-5] through base.
    static Plane axisAligned(const Vec& base);

    int ambientDim() const { return base_.n; }
    int dim() const { return static_cast<int>(basis_.size()); }
    const Vec& base() const { return base_; }
    const std::vector<Vec>& basis() const { return basis_; }
    const std::vector<Vec>& complement() const { return complement_; }

    /// Component of x - base along the plane directions.
    Vec tangentCoords(const Vec& x) const;
    /// Component of x - base along the complement (the 4d fiber coordinates).
    Vec fiberCoords(const Vec& x) const;
    /// Point of the plane through `base + sum t_i basis_i`.
    Vec fromTangent(const Vec& t) const;
    Vec project(const Vec& x) const;
    double distance(const Vec& x) const;
    /// Plane translated so it passes through x (same directions).
    Plane through(const Vec& x) const { return Plane(x, basis_); }

    bool sameSpan(const Plane& o, double tol = 1e-12) const;

private:
    Vec base_;
    std::vector<Vec> basis_;      // n-4 orthonormal vectors
    std::vector<Vec> complement_; // 4 orthonormal vectors
    void buildComplement();
};

/// Volume of the unit m-ball.
double unitBallVolume(int m);
/// Surface area of the unit (m-1)-sphere in R^m.
double unitSphereArea(int m);

/// Deterministic lattice of spacing `h` covering ball(center, radius),
/// enumerated in lexicographic order of the integer multi-index.
std::vector<Vec> ballLattice(const Vec& center, double radius, double h);

/// Lattice on an affine subspace: points base + sum k_i h dirs_i with
/// |p - center| <= radius. Enumerated lexicographically in k.
std::vector<Vec> subspaceLattice(const Vec& center, const std::vector<Vec>& dirs,
                                 double radius, double h);

/// Distance from x to the affine span of `pts` (the span of a single point is
/// the point itself). Used by the greedy independent-point extraction.
double distToAffineSpan(const Vec& x, const std::vector<Vec>& pts);

inline constexpr double kPi = 3.14159265358979323846;

} // namespace ym
