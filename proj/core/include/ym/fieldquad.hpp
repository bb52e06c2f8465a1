#pragma once

#include "ym/fields.hpp"
#include "ym/quadrature.hpp"

namespace ym {

/// A small ball the integrand concentrates in; fixed-order sampling of the
/// enclosing domain would miss it, so it is integrated separately.
struct CoreBall {
    Vec center;
    double radius;
};

/// integral of f over B_R(center) with known (pairwise disjoint) concentration
/// cores split off: each active core ball is integrated in its own centered
/// coordinates, the remainder with the cores punched out.
quad::Result ballIntegralWithCores(const quad::Integrand& f, const Vec& center, double R,
                                   const std::vector<CoreBall>& cores, const quad::Options& opt);

/// Ball integral of a function that is exactly invariant along `plane`:
/// reduced to a 1d slab profile times 4d fiber-ball integrals. `fiberCores`
/// are concentration cores in fiber coordinates.
quad::Result invariantBallIntegral(const quad::Integrand& f, const Plane& plane, const Vec& center,
                                   double radius, const std::vector<CoreBall>& fiberCores,
                                   const quad::Options& opt);

/// Concentration cores of a field in fiber coordinates of `plane`.
std::vector<CoreBall> fiberCores(const ConnectionField& field, const Plane& plane);
/// Concentration cores of a field in ambient coordinates.
std::vector<CoreBall> ambientCores(const ConnectionField& field);

/// integral of |F|^2 over B_r(x); picks the invariant reduction when the field
/// has an exact translation plane and n >= 5, and splits concentration cores
/// off in either path.
quad::Result energyInBall(const ConnectionField& field, const Vec& x, double r,
                          const quad::Options& opt);

/// integral of |F[L]|^2 over B_r(x), invariance- and core-aware the same way.
quad::Result planeEnergyInBall(const ConnectionField& field, const Plane& L, const Vec& x, double r,
                               const quad::Options& opt);

/// 4d slice energy: integral of |F|^2 over the fiber ball of `radius` around q
/// in the slice q + span(plane complement). `restriction` (optional) masks the
/// integrand, e.g. to a covering-region membership test.
quad::Result sliceEnergy(const ConnectionField& field, const Plane& plane, const Vec& q,
                         double radius, const quad::Options& opt,
                         const std::function<bool(const Vec&)>& restriction = nullptr);

/// Total energy of a 4d field with concentrated curvature (integrates a ball
/// of 60 scale lengths around the concentration centers).
quad::Result totalEnergy4d(const ConnectionField& field, const quad::Options& opt);

} // namespace ym
