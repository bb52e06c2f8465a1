#pragma once

#include <cstdint>
#include <functional>
#include <variant>
#include <vector>

#include "ym/geometry.hpp"

namespace ym::quad {

struct Result {
    double value = 0;
    double errorEstimate = 0;
    std::int64_t evaluations = 0;
};

enum class BudgetPolicy { Throw, ReturnBest };

struct Options {
    double tol = 1e-8; // absolute error target
    std::int64_t evalCap = 10'000'000;
    BudgetPolicy budgetPolicy = BudgetPolicy::Throw;
};

struct IntervalDomain {
    double a, b;
};
struct BallDomain {
    Vec center;
    double radius;
};
struct SphereDomain {
    Vec center;
    double radius;
};
struct AnnulusDomain {
    Vec center;
    double rInner, rOuter;
};
/// 4-dimensional ball inside the slice q + span(plane complement).
struct SliceBallDomain {
    Plane plane; // the n-4 invariance plane; the slice runs along its complement
    Vec center;  // in R^n, lies on the slice
    double radius;
};
/// Box along the plane directions times a fiber annulus; covers tube shells.
struct TubeDomain {
    Plane plane;
    double tHalfExtent; // half extent along each plane direction
    double rhoInner, rhoOuter;
};
struct ShellBounding {
    std::variant<BallDomain, AnnulusDomain, TubeDomain> region;
};
/// Level set {b = level} realized through the coarea window of width h:
/// (1/h) * integral over {level-h/2 < b < level+h/2} of f |grad b|^2.
struct ShellDomain {
    std::function<double(const Vec&)> level;
    std::function<Vec(const Vec&)> levelGradient;
    double levelValue;
    double width;
    ShellBounding bounding;
};

using Domain = std::variant<IntervalDomain, BallDomain, SphereDomain, AnnulusDomain,
                            SliceBallDomain, TubeDomain, ShellDomain>;

using Integrand = std::function<double(const Vec&)>;

/// Deterministic adaptive integration: dyadic subdivision of the parameter box,
/// worst-error cell split first, ties resolved by creation index.
Result integrate(const Integrand& f, const Domain& domain, const Options& opt = {});

/// Sphere integrals of f at each radius of an increasing grid.
std::vector<Result> radialProfile(const Integrand& f, const Vec& center,
                                  const std::vector<double>& rGrid, const Options& opt = {});

/// Shell integral with Richardson extrapolation over widths {h, h/2}.
Result shellIntegralRichardson(const Integrand& f, const ShellDomain& shell,
                               const Options& opt = {});

} // namespace ym::quad
