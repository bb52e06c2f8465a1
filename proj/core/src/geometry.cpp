#include "ym/geometry.hpp"

#include <algorithm>
#include <limits>

namespace ym {

Plane::Plane(Vec base, std::vector<Vec> basis) : base_(base), basis_(std::move(basis)) {
    // Re-orthonormalize the given directions so downstream contractions see an
    // exactly consistent frame.
    std::vector<Vec> ortho;
    for (const Vec& v : basis_) {
        if (v.n != base_.n) throw DimensionMismatch("plane basis dimension");
        Vec w = v;
        for (const Vec& u : ortho) w -= w.dot(u) * u;
        double nrm = w.norm();
        if (nrm < 1e-10) throw Error("plane basis vectors are linearly dependent");
        ortho.push_back((1.0 / nrm) * w);
    }
    basis_ = std::move(ortho);
    buildComplement();
}

Plane Plane::axisAligned(const Vec& base) {
    std::vector<Vec> dirs;
    for (int i = 0; i + 4 < base.n; ++i) dirs.push_back(Vec::axis(base.n, i));
    return Plane(base, dirs);
}

void Plane::buildComplement() {
    complement_.clear();
    const int n = base_.n;
    for (int k = 0; k < n && static_cast<int>(complement_.size()) < 4; ++k) {
        Vec w = Vec::axis(n, n - 1 - k); // seed from the trailing axes first
        for (const Vec& u : basis_) w -= w.dot(u) * u;
        for (const Vec& u : complement_) w -= w.dot(u) * u;
        double nrm = w.norm();
        if (nrm < 1e-8) continue;
        w *= 1.0 / nrm;
        // second Gram-Schmidt pass for orthogonality near machine precision
        for (const Vec& u : basis_) w -= w.dot(u) * u;
        for (const Vec& u : complement_) w -= w.dot(u) * u;
        w *= 1.0 / w.norm();
        complement_.push_back(w);
    }
    if (static_cast<int>(complement_.size()) != 4)
        throw Error("plane complement construction failed");
    std::reverse(complement_.begin(), complement_.end());
}

Vec Plane::tangentCoords(const Vec& x) const {
    Vec d = x - base_;
    Vec t = Vec::zero(dim());
    for (int i = 0; i < dim(); ++i) t[i] = d.dot(basis_[i]);
    return t;
}

Vec Plane::fiberCoords(const Vec& x) const {
    Vec d = x - base_;
    Vec u = Vec::zero(4);
    for (int i = 0; i < 4; ++i) u[i] = d.dot(complement_[i]);
    return u;
}

Vec Plane::fromTangent(const Vec& t) const {
    Vec p = base_;
    for (int i = 0; i < dim(); ++i) p += t[i] * basis_[i];
    return p;
}

Vec Plane::project(const Vec& x) const {
    Vec p = base_;
    Vec d = x - base_;
    for (const Vec& u : basis_) p += d.dot(u) * u;
    return p;
}

double Plane::distance(const Vec& x) const { return (x - project(x)).norm(); }

bool Plane::sameSpan(const Plane& o, double tol) const {
    if (o.dim() != dim() || o.ambientDim() != ambientDim()) return false;
    for (const Vec& v : o.basis_) {
        Vec w = v;
        for (const Vec& u : basis_) w -= w.dot(u) * u;
        if (w.norm() > tol) return false;
    }
    // base points must lie on a common translate
    Vec d = o.base_ - base_;
    for (const Vec& u : basis_) d -= d.dot(u) * u;
    return d.norm() <= tol;
}

double unitBallVolume(int m) {
    // omega_m = pi^{m/2} / Gamma(m/2 + 1); small m hardcoded exactly.
    switch (m) {
        case 0: return 1.0;
        case 1: return 2.0;
        case 2: return kPi;
        case 3: return 4.0 * kPi / 3.0;
        case 4: return kPi * kPi / 2.0;
        default: return std::pow(kPi, 0.5 * m) / std::tgamma(0.5 * m + 1.0);
    }
}

double unitSphereArea(int m) { return m * unitBallVolume(m); }

std::vector<Vec> ballLattice(const Vec& center, double radius, double h) {
    std::vector<Vec> out;
    const int n = center.n;
    const int K = static_cast<int>(std::floor(radius / h));
    std::array<int, kMaxDim> k{};
    k.fill(-K);
    if (K < 0) return out;
    const double r2 = radius * radius;
    while (true) {
        Vec p = center;
        for (int i = 0; i < n; ++i) p[i] += k[i] * h;
        if ((p - center).norm2() <= r2) out.push_back(p);
        int i = n - 1;
        while (i >= 0 && k[i] == K) k[i--] = -K;
        if (i < 0) break;
        ++k[i];
    }
    return out;
}

std::vector<Vec> subspaceLattice(const Vec& center, const std::vector<Vec>& dirs,
                                 double radius, double h) {
    std::vector<Vec> out;
    const int d = static_cast<int>(dirs.size());
    if (d == 0) {
        out.push_back(center);
        return out;
    }
    const int K = static_cast<int>(std::floor(radius / h));
    std::array<int, kMaxDim> k{};
    for (int i = 0; i < d; ++i) k[i] = -K;
    const double r2 = radius * radius;
    while (true) {
        Vec p = center;
        for (int i = 0; i < d; ++i) p += (k[i] * h) * dirs[i];
        if ((p - center).norm2() <= r2) out.push_back(p);
        int i = d - 1;
        while (i >= 0 && k[i] == K) k[i--] = -K;
        if (i < 0) break;
        ++k[i];
    }
    return out;
}

double distToAffineSpan(const Vec& x, const std::vector<Vec>& pts) {
    if (pts.empty()) return std::numeric_limits<double>::infinity();
    Vec d = x - pts[0];
    std::vector<Vec> ortho;
    for (size_t j = 1; j < pts.size(); ++j) {
        Vec w = pts[j] - pts[0];
        for (const Vec& u : ortho) w -= w.dot(u) * u;
        double nrm = w.norm();
        if (nrm > 1e-12) ortho.push_back((1.0 / nrm) * w);
    }
    for (const Vec& u : ortho) d -= d.dot(u) * u;
    return d.norm();
}

} // namespace ym
