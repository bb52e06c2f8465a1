#include "ym/fields.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ym {
namespace detail {

// 't Hooft symbols eta^a_{mu nu}, indices 0-based with the "4" direction at
// index 3: eta^a_{bc} = eps_{abc}, eta^a_{b3} = delta_{ab}, eta^a_{3b} = -delta_{ab}.
struct Hooft {
    double e[3][4][4] = {};
    Hooft() {
        auto eps = [](int a, int b, int c) -> double {
            if (a == b || b == c || a == c) return 0.0;
            return ((b - a + 3) % 3 == 1) ? 1.0 : -1.0;
        };
        for (int a = 0; a < 3; ++a) {
            for (int b = 0; b < 3; ++b)
                for (int c = 0; c < 3; ++c) e[a][b][c] = eps(a, b, c);
            for (int b = 0; b < 3; ++b) {
                e[a][b][3] = (a == b) ? 1.0 : 0.0;
                e[a][3][b] = (a == b) ? -1.0 : 0.0;
            }
        }
    }
};
static const Hooft kEta;

class FieldImpl {
public:
    virtual ~FieldImpl() = default;
    virtual int dim() const = 0;
    virtual FieldKind kind() const = 0;
    virtual void potential(const Vec& x, LieValue out[kMaxDim]) const = 0;
    virtual void jacobian(const Vec& x, LieValue out[kMaxDim * kMaxDim]) const = 0;
    virtual CurvatureTensor curvature(const Vec& x) const;
    virtual double density(const Vec& x) const { return curvature(x).densityNorm2(); }
    virtual std::optional<Plane> invariancePlane() const { return std::nullopt; }
    virtual double localScale(const Vec&) const { return 1.0; }
    virtual std::vector<std::pair<Vec, double>> centers() const { return {}; }
};

CurvatureTensor FieldImpl::curvature(const Vec& x) const {
    const int n = dim();
    LieValue A[kMaxDim];
    LieValue dA[kMaxDim * kMaxDim];
    potential(x, A);
    jacobian(x, dA);
    CurvatureTensor F;
    F.n = n;
    for (int mu = 0; mu < n; ++mu)
        for (int nu = mu + 1; nu < n; ++nu)
            F.set(mu, nu, dA[mu * n + nu] - dA[nu * n + mu] + bracket(A[mu], A[nu]));
    return F;
}

class FlatField final : public FieldImpl {
public:
    explicit FlatField(int n) : n_(n) {}
    int dim() const override { return n_; }
    FieldKind kind() const override { return FieldKind::Flat; }
    void potential(const Vec&, LieValue out[kMaxDim]) const override {
        for (int i = 0; i < n_; ++i) out[i] = LieValue{};
    }
    void jacobian(const Vec&, LieValue out[kMaxDim * kMaxDim]) const override {
        for (int i = 0; i < n_ * n_; ++i) out[i] = LieValue{};
    }
    CurvatureTensor curvature(const Vec&) const override {
        CurvatureTensor F;
        F.n = n_;
        return F;
    }
    double density(const Vec&) const override { return 0.0; }

private:
    int n_;
};

class BpstField final : public FieldImpl {
public:
    BpstField(Vec c, double lambda) : c_(c), lam_(lambda) {
        if (c.n != 4) throw DimensionMismatch("BPST center must be 4-dimensional");
        if (!(lambda > 0)) throw Error("BPST scale must be positive");
    }
    int dim() const override { return 4; }
    FieldKind kind() const override { return FieldKind::Bpst; }

    void potential(const Vec& x, LieValue out[kMaxDim]) const override {
        Vec y = x - c_;
        double s = y.norm2() + lam_ * lam_;
        for (int mu = 0; mu < 4; ++mu) {
            LieValue v{};
            for (int a = 0; a < 3; ++a) {
                double acc = 0;
                for (int nu = 0; nu < 4; ++nu) acc += kEta.e[a][mu][nu] * y[nu];
                v[a] = 2.0 * acc / s;
            }
            out[mu] = v;
        }
    }
    void jacobian(const Vec& x, LieValue out[kMaxDim * kMaxDim]) const override {
        Vec y = x - c_;
        double s = y.norm2() + lam_ * lam_;
        double s2 = s * s;
        // d_mu A^a_nu = 2 eta^a_{nu mu}/s - 4 eta^a_{nu rho} y_rho y_mu / s^2
        for (int mu = 0; mu < 4; ++mu)
            for (int nu = 0; nu < 4; ++nu) {
                LieValue v{};
                for (int a = 0; a < 3; ++a) {
                    double acc = 0;
                    for (int rho = 0; rho < 4; ++rho) acc += kEta.e[a][nu][rho] * y[rho];
                    v[a] = 2.0 * kEta.e[a][nu][mu] / s - 4.0 * acc * y[mu] / s2;
                }
                out[mu * 4 + nu] = v;
            }
    }
    CurvatureTensor curvature(const Vec& x) const override {
        Vec y = x - c_;
        double s = y.norm2() + lam_ * lam_;
        double f = -4.0 * lam_ * lam_ / (s * s);
        CurvatureTensor F;
        F.n = 4;
        for (int mu = 0; mu < 4; ++mu)
            for (int nu = mu + 1; nu < 4; ++nu) {
                LieValue v{};
                for (int a = 0; a < 3; ++a) v[a] = f * kEta.e[a][mu][nu];
                F.set(mu, nu, v);
            }
        return F;
    }
    double density(const Vec& x) const override { return bpst::density((x - c_).norm2(), lam_); }
    double localScale(const Vec& x) const override {
        return std::sqrt((x - c_).norm2() + lam_ * lam_);
    }
    std::vector<std::pair<Vec, double>> centers() const override { return {{c_, lam_}}; }

    Vec c_;
    double lam_;
};

// C2 ramp rising 0 -> 1 across [0,1]
inline double quintic(double t) {
    t = std::clamp(t, 0.0, 1.0);
    return t * t * t * (10.0 + t * (-15.0 + 6.0 * t));
}
inline double quinticPrime(double t) {
    if (t <= 0.0 || t >= 1.0) return 0.0;
    return t * t * (30.0 + t * (-60.0 + 30.0 * t));
}

// BPST in singular gauge, smoothly windowed to zero outside its influence
// tube. The singular gauge has the 1/d^3 tail, so the window only removes a
// ~1e-6 energy fraction and the cross terms of superposed bubbles vanish
// identically outside the windows. Same gauge-invariant density as BpstField
// wherever the window is 1.
class LocalizedBpstField final : public FieldImpl {
public:
    LocalizedBpstField(Vec c, double lambda) : c_(c), lam_(lambda), W_(50.0 * lambda) {
        if (c.n != 4) throw DimensionMismatch("BPST center must be 4-dimensional");
        if (!(lambda > 0)) throw Error("BPST scale must be positive");
    }
    int dim() const override { return 4; }
    FieldKind kind() const override { return FieldKind::Bpst; }

    // window on s = |y|^2 / W^2: 1 below (0.8)^2, 0 above (0.9)^2
    double window(double s, double& dchi_ds) const {
        const double lo = 0.64, hi = 0.81;
        double t = (s - lo) / (hi - lo);
        dchi_ds = -quinticPrime(t) / (hi - lo);
        return 1.0 - quintic(t);
    }

    void potential(const Vec& x, LieValue out[kMaxDim]) const override {
        Vec y = x - c_;
        double u = y.norm2();
        if (u <= 1e-12 * lam_ * lam_) { // exact-core guard; regular gauge has A(0)=0
            for (int mu = 0; mu < 4; ++mu) out[mu] = LieValue{};
            return;
        }
        double l2 = lam_ * lam_;
        double g = l2 / (u * (u + l2));
        double dchi;
        double chi = window(u / (W_ * W_), dchi);
        for (int mu = 0; mu < 4; ++mu) {
            LieValue v{};
            for (int a = 0; a < 3; ++a) {
                double acc = 0;
                for (int nu = 0; nu < 4; ++nu) acc += kEtaBar.e[a][mu][nu] * y[nu];
                v[a] = 2.0 * acc * g * chi;
            }
            out[mu] = v;
        }
    }
    void jacobian(const Vec& x, LieValue out[kMaxDim * kMaxDim]) const override {
        Vec y = x - c_;
        double u = y.norm2();
        double l2 = lam_ * lam_;
        if (u <= 1e-12 * l2) {
            for (int i = 0; i < 16; ++i) out[i] = LieValue{};
            return;
        }
        double g = l2 / (u * (u + l2));
        double gp = -l2 * (2.0 * u + l2) / (u * u * (u + l2) * (u + l2));
        double dchi;
        double chi = window(u / (W_ * W_), dchi);
        dchi /= (W_ * W_);
        // d_mu A^a_nu with A^a_nu = chi(u) * 2 etabar^a_{nu rho} y_rho g(u)
        for (int mu = 0; mu < 4; ++mu)
            for (int nu = 0; nu < 4; ++nu) {
                LieValue v{};
                for (int a = 0; a < 3; ++a) {
                    double acc = 0;
                    for (int rho = 0; rho < 4; ++rho) acc += kEtaBar.e[a][nu][rho] * y[rho];
                    double base = 2.0 * kEtaBar.e[a][nu][mu] * g + 2.0 * acc * gp * 2.0 * y[mu];
                    v[a] = chi * base + dchi * 2.0 * y[mu] * 2.0 * acc * g;
                }
                out[mu * 4 + nu] = v;
            }
    }
    double density(const Vec& x) const override {
        double u = (x - c_).norm2();
        double l2 = lam_ * lam_;
        if (u <= 0.63 * W_ * W_ || u <= 1e-12 * l2)
            return bpst::density(u, lam_); // window is exactly 1 there
        return FieldImpl::density(x);
    }
    double localScale(const Vec& x) const override {
        return std::sqrt((x - c_).norm2() + lam_ * lam_);
    }
    std::vector<std::pair<Vec, double>> centers() const override { return {{c_, lam_}}; }

private:
    struct HooftBar {
        double e[3][4][4] = {};
        HooftBar() {
            auto eps = [](int a, int b, int c) -> double {
                if (a == b || b == c || a == c) return 0.0;
                return ((b - a + 3) % 3 == 1) ? 1.0 : -1.0;
            };
            for (int a = 0; a < 3; ++a) {
                for (int b = 0; b < 3; ++b)
                    for (int c = 0; c < 3; ++c) e[a][b][c] = eps(a, b, c);
                for (int b = 0; b < 3; ++b) {
                    e[a][b][3] = (a == b) ? -1.0 : 0.0;
                    e[a][3][b] = (a == b) ? 1.0 : 0.0;
                }
            }
        }
    };
    static const HooftBar kEtaBar;

    Vec c_;
    double lam_;
    double W_;
};
const LocalizedBpstField::HooftBar LocalizedBpstField::kEtaBar{};

class ExtendedField final : public FieldImpl {
public:
    ExtendedField(ConnectionField inner, Plane plane)
        : inner_(std::move(inner)), plane_(std::move(plane)) {
        if (inner_.dim() != 4) throw DimensionMismatch("extended inner field must be 4d");
    }
    int dim() const override { return plane_.ambientDim(); }
    FieldKind kind() const override { return FieldKind::Extended; }

    void potential(const Vec& x, LieValue out[kMaxDim]) const override {
        const int n = dim();
        Vec u = plane_.fiberCoords(x);
        LieValue A4[kMaxDim];
        inner_.potential(u, A4);
        const auto& Q = plane_.complement();
        for (int mu = 0; mu < n; ++mu) {
            LieValue v{};
            for (int i = 0; i < 4; ++i) v += Q[i][mu] * A4[i];
            out[mu] = v;
        }
    }
    void jacobian(const Vec& x, LieValue out[kMaxDim * kMaxDim]) const override {
        const int n = dim();
        Vec u = plane_.fiberCoords(x);
        LieValue dA4[kMaxDim * kMaxDim];
        inner_.potentialJacobian(u, dA4);
        const auto& Q = plane_.complement();
        for (int mu = 0; mu < n; ++mu)
            for (int nu = 0; nu < n; ++nu) {
                LieValue v{};
                for (int j = 0; j < 4; ++j)
                    for (int i = 0; i < 4; ++i) v += Q[j][mu] * Q[i][nu] * dA4[j * 4 + i];
                out[mu * n + nu] = v;
            }
    }
    CurvatureTensor curvature(const Vec& x) const override {
        const int n = dim();
        CurvatureTensor F4 = inner_.curvature(plane_.fiberCoords(x));
        const auto& Q = plane_.complement();
        CurvatureTensor F;
        F.n = n;
        for (int mu = 0; mu < n; ++mu)
            for (int nu = mu + 1; nu < n; ++nu) {
                LieValue v{};
                for (int i = 0; i < 4; ++i)
                    for (int j = 0; j < 4; ++j)
                        if (i != j) v += Q[i][mu] * Q[j][nu] * F4.at(i, j);
                F.set(mu, nu, v);
            }
        return F;
    }
    double density(const Vec& x) const override {
        return inner_.curvatureDensity(plane_.fiberCoords(x));
    }
    std::optional<Plane> invariancePlane() const override { return plane_; }
    double localScale(const Vec& x) const override {
        return inner_.localScale(plane_.fiberCoords(x));
    }
    std::vector<std::pair<Vec, double>> centers() const override {
        std::vector<std::pair<Vec, double>> out;
        for (const auto& [c4, lam] : inner_.concentrationCenters()) {
            Vec p = plane_.base();
            const auto& Q = plane_.complement();
            for (int i = 0; i < 4; ++i) p += c4[i] * Q[i];
            out.push_back({p, lam});
        }
        return out;
    }

    ConnectionField inner_;
    Plane plane_;
};

class SuperpositionField final : public FieldImpl {
public:
    explicit SuperpositionField(std::vector<ConnectionField> parts) {
        if (parts.empty()) throw Error("superposition needs at least one component");
        n_ = parts[0].dim();
        for (auto& p : parts) {
            if (p.dim() != n_) throw DimensionMismatch("superposition component dimensions differ");
            if (p.kind() != FieldKind::Extended)
                throw Error("superposition components must be extended fields");
            parts_.push_back(localize(p));
        }
        checkInfluence();
    }

    // swap each component's inner BPST for its windowed singular-gauge form so
    // the summands have genuinely disjoint supports
    static ConnectionField localize(const ConnectionField& part) {
        const auto* ext = dynamic_cast<const ExtendedField*>(&part.impl());
        if (!ext) throw Error("superposition components must be extended fields");
        const auto* bp = dynamic_cast<const BpstField*>(&ext->inner_.impl());
        if (!bp) {
            if (dynamic_cast<const LocalizedBpstField*>(&ext->inner_.impl())) return part;
            throw Error("superposition components must wrap BPST instantons");
        }
        auto loc = std::make_shared<LocalizedBpstField>(bp->c_, bp->lam_);
        return ConnectionField(std::make_shared<ExtendedField>(ConnectionField(loc), ext->plane_));
    }

    // fiber distance from x to the component's bubble axis
    static double tubeDistance(const ConnectionField& part, const Vec& x) {
        auto centers = part.concentrationCenters();
        auto pl = part.invariancePlane();
        if (centers.empty() || !pl) return std::numeric_limits<double>::infinity();
        Vec axisPoint = centers[0].first;
        Vec d = x - axisPoint;
        for (const Vec& u : pl->basis()) d -= d.dot(u) * u;
        return d.norm();
    }

    double density(const Vec& x) const override {
        // windows are disjoint, so at most one component is active at x
        int hit = -1, count = 0;
        for (size_t i = 0; i < parts_.size(); ++i) {
            double lam = parts_[i].concentrationCenters()[0].second;
            if (tubeDistance(parts_[i], x) <= 46.0 * lam) {
                hit = static_cast<int>(i);
                ++count;
            }
        }
        if (count == 0) return 0.0;
        if (count == 1) return parts_[hit].curvatureDensity(x);
        return FieldImpl::density(x);
    }
    int dim() const override { return n_; }
    FieldKind kind() const override { return FieldKind::Superposition; }

    void potential(const Vec& x, LieValue out[kMaxDim]) const override {
        for (int i = 0; i < n_; ++i) out[i] = LieValue{};
        LieValue tmp[kMaxDim];
        for (const auto& p : parts_) {
            p.potential(x, tmp);
            for (int i = 0; i < n_; ++i) out[i] += tmp[i];
        }
    }
    void jacobian(const Vec& x, LieValue out[kMaxDim * kMaxDim]) const override {
        for (int i = 0; i < n_ * n_; ++i) out[i] = LieValue{};
        LieValue tmp[kMaxDim * kMaxDim];
        for (const auto& p : parts_) {
            p.potentialJacobian(x, tmp);
            for (int i = 0; i < n_ * n_; ++i) out[i] += tmp[i];
        }
    }
    std::optional<Plane> invariancePlane() const override {
        // invariant only if every component shares one translation plane
        auto pl = parts_[0].invariancePlane();
        if (!pl) return std::nullopt;
        for (size_t i = 1; i < parts_.size(); ++i) {
            auto q = parts_[i].invariancePlane();
            if (!q) return std::nullopt;
            // direction spans must agree; base points may differ
            Plane shifted = q->through(pl->base());
            if (!shifted.sameSpan(*pl, 1e-9)) return std::nullopt;
        }
        return pl;
    }
    double localScale(const Vec& x) const override {
        double s = parts_[0].localScale(x);
        for (size_t i = 1; i < parts_.size(); ++i) s = std::min(s, parts_[i].localScale(x));
        return s;
    }
    std::vector<std::pair<Vec, double>> centers() const override {
        std::vector<std::pair<Vec, double>> out;
        for (const auto& p : parts_)
            for (const auto& c : p.concentrationCenters()) out.push_back(c);
        return out;
    }

private:
    void checkInfluence() const {
        // influence region of an extended bubble: tube of radius 50*lambda
        // around its axis. Pairwise tube distance must be positive.
        for (size_t i = 0; i < parts_.size(); ++i)
            for (size_t j = i + 1; j < parts_.size(); ++j) {
                double di = influenceRadius(parts_[i]);
                double dj = influenceRadius(parts_[j]);
                double dist = axisDistance(parts_[i], parts_[j]);
                if (dist <= di + dj)
                    throw Error("superposition influence tubes overlap (distance " +
                                std::to_string(dist) + " <= " + std::to_string(di + dj) + ")");
            }
    }
    static double influenceRadius(const ConnectionField& f) {
        double r = 0;
        for (const auto& [c, lam] : f.concentrationCenters()) r = std::max(r, 50.0 * lam);
        return r;
    }
    static double axisDistance(const ConnectionField& a, const ConnectionField& b) {
        // minimum distance between the affine axes (center + invariance plane)
        auto ca = a.concentrationCenters();
        auto cb = b.concentrationCenters();
        auto pa = a.invariancePlane();
        auto pb = b.invariancePlane();
        if (ca.empty() || cb.empty()) return std::numeric_limits<double>::infinity();
        double best = std::numeric_limits<double>::infinity();
        for (const auto& [xa, la] : ca)
            for (const auto& [xb, lb] : cb) {
                best = std::min(best, affineDistance(xa, pa ? pa->basis() : std::vector<Vec>{},
                                                     xb, pb ? pb->basis() : std::vector<Vec>{}));
            }
        return best;
    }
    static double affineDistance(const Vec& p, const std::vector<Vec>& U, const Vec& q,
                                 const std::vector<Vec>& V) {
        // min_{t,s} |p + U t - q - V s| via normal equations on the joint span
        std::vector<Vec> dirs = U;
        for (const Vec& v : V) dirs.push_back(v);
        Vec d = q - p;
        // Gram-Schmidt the joint directions, project out of d
        std::vector<Vec> ortho;
        for (Vec w : dirs) {
            for (const Vec& u : ortho) w -= w.dot(u) * u;
            double nrm = w.norm();
            if (nrm > 1e-12) ortho.push_back((1.0 / nrm) * w);
        }
        for (const Vec& u : ortho) d -= d.dot(u) * u;
        return d.norm();
    }

    std::vector<ConnectionField> parts_;
    int n_;
};

class BlowUpField final : public FieldImpl {
public:
    BlowUpField(ConnectionField inner, Vec center, double factor)
        : inner_(std::move(inner)), c_(center), r_(factor) {
        if (!(factor > 0)) throw Error("blow-up factor must be positive");
        if (center.n != inner_.dim()) throw DimensionMismatch("blow-up center dimension");
    }
    int dim() const override { return inner_.dim(); }
    FieldKind kind() const override { return FieldKind::BlowUp; }
    Vec map(const Vec& y) const { return c_ + r_ * y; }

    void potential(const Vec& y, LieValue out[kMaxDim]) const override {
        inner_.potential(map(y), out);
        for (int i = 0; i < dim(); ++i) out[i] *= r_;
    }
    void jacobian(const Vec& y, LieValue out[kMaxDim * kMaxDim]) const override {
        inner_.potentialJacobian(map(y), out);
        double r2 = r_ * r_;
        for (int i = 0; i < dim() * dim(); ++i) out[i] *= r2;
    }
    CurvatureTensor curvature(const Vec& y) const override {
        CurvatureTensor F = inner_.curvature(map(y));
        double r2 = r_ * r_;
        for (auto& v : F.f) v *= r2;
        return F;
    }
    double density(const Vec& y) const override {
        double r2 = r_ * r_;
        return r2 * r2 * inner_.curvatureDensity(map(y));
    }
    std::optional<Plane> invariancePlane() const override {
        auto pl = inner_.invariancePlane();
        if (!pl) return std::nullopt;
        Vec base = (1.0 / r_) * (pl->base() - c_);
        return Plane(base, pl->basis());
    }
    double localScale(const Vec& y) const override { return inner_.localScale(map(y)) / r_; }
    std::vector<std::pair<Vec, double>> centers() const override {
        std::vector<std::pair<Vec, double>> out;
        for (const auto& [x, lam] : inner_.concentrationCenters())
            out.push_back({(1.0 / r_) * (x - c_), lam / r_});
        return out;
    }

    ConnectionField inner_;
    Vec c_;
    double r_;
};

} // namespace detail

ConnectionField ConnectionField::flat(int dim) {
    return ConnectionField(std::make_shared<detail::FlatField>(dim));
}
ConnectionField ConnectionField::bpst(const Vec& center4, double lambda) {
    return ConnectionField(std::make_shared<detail::BpstField>(center4, lambda));
}
ConnectionField ConnectionField::extended(const ConnectionField& inner4, const Plane& plane) {
    return ConnectionField(std::make_shared<detail::ExtendedField>(inner4, plane));
}
ConnectionField ConnectionField::superposition(const std::vector<ConnectionField>& parts) {
    return ConnectionField(std::make_shared<detail::SuperpositionField>(parts));
}
ConnectionField ConnectionField::blowUp(const ConnectionField& inner, const Vec& center,
                                        double factor) {
    return ConnectionField(std::make_shared<detail::BlowUpField>(inner, center, factor));
}

int ConnectionField::dim() const { return impl_->dim(); }
FieldKind ConnectionField::kind() const { return impl_->kind(); }

void ConnectionField::potential(const Vec& x, LieValue out[kMaxDim]) const {
    if (x.n != dim()) throw DimensionMismatch("point dimension does not match field");
    impl_->potential(x, out);
}
void ConnectionField::potentialJacobian(const Vec& x, LieValue out[kMaxDim * kMaxDim]) const {
    if (x.n != dim()) throw DimensionMismatch("point dimension does not match field");
    impl_->jacobian(x, out);
}
CurvatureTensor ConnectionField::curvature(const Vec& x) const {
    if (x.n != dim()) throw DimensionMismatch("point dimension does not match field");
    return impl_->curvature(x);
}
double ConnectionField::curvatureDensity(const Vec& x) const {
    if (x.n != dim()) throw DimensionMismatch("point dimension does not match field");
    return impl_->density(x);
}

double ConnectionField::contractRadial(const Vec& x, const Vec& origin) const {
    Vec d = x - origin;
    double nrm = d.norm();
    if (nrm < 1e-14) throw Error("contractRadial: x coincides with origin");
    d *= 1.0 / nrm;
    return curvature(x).contractionNorm2(d);
}

double ConnectionField::contractPlane(const Vec& x, const Plane& plane) const {
    if (plane.ambientDim() != dim()) throw DimensionMismatch("plane dimension mismatch");
    CurvatureTensor F = curvature(x);
    double s = 0;
    for (const Vec& l : plane.basis()) s += F.contractionNorm2(l);
    return s;
}

std::pair<double, double> ConnectionField::covariantDerivativeNorms(const Vec& x,
                                                                    int maxOrder) const {
    const int n = dim();
    const double h = 1e-3 * std::max(localScale(x), 1e-30);

    // grad_s F_{mu nu} = central difference of F + [A_s, F]
    auto covGrad = [&](const Vec& y, CurvatureTensor out[kMaxDim]) {
        LieValue A[kMaxDim];
        impl_->potential(y, A);
        CurvatureTensor Fy = impl_->curvature(y);
        for (int s = 0; s < n; ++s) {
            Vec yp = y, ym = y;
            yp[s] += h;
            ym[s] -= h;
            CurvatureTensor Fp = impl_->curvature(yp);
            CurvatureTensor Fm = impl_->curvature(ym);
            CurvatureTensor G;
            G.n = n;
            for (int mu = 0; mu < n; ++mu)
                for (int nu = mu + 1; nu < n; ++nu) {
                    LieValue d = (1.0 / (2.0 * h)) * (Fp.at(mu, nu) - Fm.at(mu, nu));
                    d += bracket(A[s], Fy.at(mu, nu));
                    G.set(mu, nu, d);
                }
            out[s] = G;
        }
    };

    CurvatureTensor G[kMaxDim];
    covGrad(x, G);
    double g2 = 0;
    for (int s = 0; s < n; ++s) g2 += G[s].densityNorm2();
    double gradNorm = std::sqrt(g2);
    if (maxOrder < 2) return {gradNorm, 0.0};

    // second order: central difference of the first covariant gradient plus
    // the connection correction on the Lie index
    LieValue A[kMaxDim];
    impl_->potential(x, A);
    double h2 = h;
    double hess2 = 0;
    std::array<CurvatureTensor, kMaxDim> Gp, Gm;
    for (int t = 0; t < n; ++t) {
        Vec xp = x, xm = x;
        xp[t] += h2;
        xm[t] -= h2;
        covGrad(xp, Gp.data());
        covGrad(xm, Gm.data());
        for (int s = 0; s < n; ++s)
            for (int mu = 0; mu < n; ++mu)
                for (int nu = mu + 1; nu < n; ++nu) {
                    LieValue d =
                        (1.0 / (2.0 * h2)) * (Gp[s].at(mu, nu) - Gm[s].at(mu, nu));
                    d += bracket(A[t], G[s].at(mu, nu));
                    hess2 += 2.0 * d.norm2(); // ordered (mu,nu) pairs
                }
    }
    return {gradNorm, std::sqrt(hess2)};
}

std::optional<Plane> ConnectionField::invariancePlane() const { return impl_->invariancePlane(); }
double ConnectionField::localScale(const Vec& x) const { return impl_->localScale(x); }
std::vector<std::pair<Vec, double>> ConnectionField::concentrationCenters() const {
    return impl_->centers();
}

namespace bpst {

double totalEnergy() { return totalEnergyFactor * kPi * kPi; }

double energyFraction(double R, double lambda) {
    // 12 lambda^4 * int_0^R rho^3 (rho^2+lambda^2)^{-4} drho
    //   = 12 l^4 * 1/2 [ -1/2 u^{-2} + l^2/3 u^{-3} ]_{l^2}^{R^2+l^2}
    double l2 = lambda * lambda;
    double s = R * R + l2;
    double upper = -0.5 / (s * s) + l2 / (3.0 * s * s * s);
    double lower = -1.0 / (6.0 * l2 * l2);
    return 12.0 * l2 * l2 * 0.5 * (upper - lower);
}

} // namespace bpst

} // namespace ym
