#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ym/fieldquad.hpp"

namespace ym {

struct MonotoneOptions {
    quad::Options quad{1e-6, 10'000'000, quad::BudgetPolicy::ReturnBest};
    /// theta-bar sup lattice spacing = r / thetaBarDensity
    int thetaBarDensity = 4;
    /// pinched-point scan lattice spacing = R / pinchLatticeDensity
    int pinchLatticeDensity = 4;
    /// radii of the theta pinching test, as multiples of the ball radius
    double pinchOuterFactor = 3.0;
    double pinchInnerFactor = 0.1;
    /// epsilon-regularity constants (mean-normalized theta form)
    double epsRegularity = 0.1;
    double epsRegConstant = 100.0;
};

/// theta_r(x) = r^{4-n} * integral over B_r(x) of |F|^2.
double theta(const ConnectionField& field, const Vec& x, double r, double tol);
double theta(const ConnectionField& field, const Vec& x, double r, const MonotoneOptions& opt);
/// theta with its propagated quadrature error estimate.
quad::Result thetaWithError(const ConnectionField& field, const Vec& x, double r,
                            const MonotoneOptions& opt);

/// mean-normalized variant theta_r / omega_n, the form epsilon thresholds use.
double thetaMean(const ConnectionField& field, const Vec& x, double r, const MonotoneOptions& opt);

/// sup of theta_r(y) over a deterministic lattice in B_r(x) (a lower bound for
/// the true sup); exploits exact translation invariance when available.
double thetaBar(const ConnectionField& field, const Vec& x, double r, int sampleDensity,
                const MonotoneOptions& opt);

struct ThetaProfile {
    Vec center;
    std::vector<double> r;
    std::vector<double> theta;
    std::vector<double> dthetaDr;   // centered differences
    std::vector<double> sphereTerm; // 4 r^{4-n} int_{S_r} |F[dr]|^2
    std::string toCsv() const;      // columns: r, theta, dtheta_dr, sphere_term
};

ThetaProfile thetaProfile(const ConnectionField& field, const Vec& x,
                          const std::vector<double>& rGrid, const MonotoneOptions& opt);

/// max relative defect between dtheta/dr and the sphere term over the grid.
double thetaDerivativeCheck(const ConnectionField& field, const Vec& x,
                            const std::vector<double>& rGrid, const MonotoneOptions& opt);

struct SymmetryScore {
    double s0 = 0;     // mean of r^4 |F[dr]|^2 over the ball
    double sPlane = 0; // mean of |F[L]|^2 over the ball
    Plane plane;
};

SymmetryScore symmetryScore(const ConnectionField& field, const Ball& ball, const Plane& plane,
                            const MonotoneOptions& opt);

/// r_A(x): sup of s <= rMax with |F| <= s^{-2} on a sample lattice of B_s(x).
double regularityScale(const ConnectionField& field, const Vec& x, double rMax,
                       const MonotoneOptions& opt);

struct EpsRegReport {
    double thetaOuter = 0; // mean-normalized theta at twice the radius
    double supInner = 0;   // sup of |F|^2 on the inner ball (sampled)
    double meanOuter = 0;  // mean of |F|^2 on the outer ball
    bool hypothesis = false;
    bool conclusion = false;
    bool passes = false;
};

EpsRegReport epsRegCheck(const ConnectionField& field, const Ball& ball,
                         const MonotoneOptions& opt);

struct PinchedScan {
    std::vector<Vec> pinched;     // all pinched lattice points, deterministic order
    std::vector<Vec> independent; // greedy tau-independent subset (at most n-3)
};

/// Scan a lattice of B for points with |theta_outer - theta_inner| < delta and
/// greedily extract an affinely tau-independent subset.
PinchedScan pinchedScan(const ConnectionField& field, const Ball& ball, double delta, double tau,
                        const MonotoneOptions& opt);

/// The spec-facing form: the independent subset, empty optional when none.
std::optional<std::vector<Vec>> pinchedPointsSpan(const ConnectionField& field, const Ball& ball,
                                                  double delta, double tau,
                                                  const MonotoneOptions& opt);

} // namespace ym
