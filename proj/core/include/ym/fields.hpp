#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ym/geometry.hpp"
#include "ym/lie.hpp"

namespace ym {

/// Antisymmetric n x n tensor of Lie-algebra values, F_{nu mu} = -F_{mu nu}
/// exactly by construction.
struct CurvatureTensor {
    int n = 0;
    std::array<LieValue, kMaxDim * kMaxDim> f{};

    const LieValue& at(int mu, int nu) const { return f[mu * n + nu]; }
    void set(int mu, int nu, const LieValue& v) {
        f[mu * n + nu] = v;
        f[nu * n + mu] = -v;
    }
    /// |F|^2 summed over ordered index pairs (both (mu,nu) and (nu,mu)).
    double densityNorm2() const {
        double s = 0;
        for (int mu = 0; mu < n; ++mu)
            for (int nu = 0; nu < n; ++nu) s += at(mu, nu).norm2();
        return s;
    }
    /// F(v, .) contracted against a direction: sum_{nu,a} (F^a(v, e_nu))^2.
    double contractionNorm2(const Vec& v) const {
        double s = 0;
        for (int nu = 0; nu < n; ++nu) {
            LieValue w{};
            for (int mu = 0; mu < n; ++mu) w += v[mu] * at(mu, nu);
            s += w.norm2();
        }
        return s;
    }
};

namespace detail {
class FieldImpl;
}

enum class FieldKind { Flat, Bpst, Extended, Superposition, BlowUp };

/// Analytic gauge field on R^n with evaluable potential, curvature and
/// derivatives. Immutable value type; cheap to copy.
class ConnectionField {
public:
    static ConnectionField flat(int dim);
    /// BPST instanton on R^4 in regular gauge, center c and scale lambda > 0.
    static ConnectionField bpst(const Vec& center4, double lambda);
    /// 4d field extended translation-invariantly along `plane` (the n-4
    /// invariance directions); the inner field lives in the fiber coordinates
    /// given by the plane's complement frame.
    static ConnectionField extended(const ConnectionField& inner4, const Plane& plane);
    /// Sum of extended fields. Throws unless influence tubes (radius
    /// 50*lambda around each bubble axis) are pairwise disjoint.
    static ConnectionField superposition(const std::vector<ConnectionField>& parts);
    /// r^{-1} A rescaling: curvatureDensity(blowUp(A,c,r), y) = r^4 * density(A, c+ry).
    static ConnectionField blowUp(const ConnectionField& inner, const Vec& center, double factor);

    int dim() const;
    FieldKind kind() const;

    /// A_mu(x), all n direction components.
    void potential(const Vec& x, LieValue out[kMaxDim]) const;
    /// dA[mu][nu] = partial_mu A_nu (x); row-major n x n.
    void potentialJacobian(const Vec& x, LieValue out[kMaxDim * kMaxDim]) const;

    CurvatureTensor curvature(const Vec& x) const;
    double curvatureDensity(const Vec& x) const;
    /// |F[dr]|^2 with dr the unit radial direction from `origin`; x != origin.
    double contractRadial(const Vec& x, const Vec& origin) const;
    /// |F[L]|^2 = sum_i |F(l_i, .)|^2 over the plane's basis.
    double contractPlane(const Vec& x, const Plane& plane) const;

    /// (|grad F|, |grad^2 F|) by nested covariant central differences; the
    /// step adapts to the local field scale. maxOrder 1 skips the hessian.
    std::pair<double, double> covariantDerivativeNorms(const Vec& x, int maxOrder = 2) const;

    /// Plane of exact translation invariance, when the family has one.
    std::optional<Plane> invariancePlane() const;
    /// Characteristic smoothness length at x (steers finite-difference steps).
    double localScale(const Vec& x) const;
    /// Centers of curvature concentration (bubble axes' fiber points mapped to
    /// R^n) with their scales; empty for flat. Used by covering heuristics.
    std::vector<std::pair<Vec, double>> concentrationCenters() const;

    const detail::FieldImpl& impl() const { return *impl_; }
    explicit ConnectionField(std::shared_ptr<const detail::FieldImpl> p) : impl_(std::move(p)) {}

private:
    std::shared_ptr<const detail::FieldImpl> impl_;
};

/// Closed-form BPST radial quantities, used as oracles and fast paths.
namespace bpst {
/// |F|^2 at distance rho from the center.
inline double density(double rho2, double lambda) {
    double s = lambda * lambda + rho2;
    double q = (lambda * lambda) / (s * s);
    return 192.0 * q * q;
}
/// Total energy over R^4 under the ordered-pair norm convention.
inline constexpr double totalEnergyFactor = 32.0; // times pi^2
double totalEnergy();
/// Fraction of the total energy inside radius R around the center.
double energyFraction(double R, double lambda);
} // namespace bpst

} // namespace ym
