#include "ym/monotone.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace ym {
namespace {

// Lattice of candidate points in B_r(x), reduced to the 4d fiber section when
// the field is exactly invariant (any invariant function of y sees every value
// on the section).
std::vector<Vec> supSampleLattice(const ConnectionField& field, const Vec& x, double r,
                                  double spacing) {
    auto inv = field.invariancePlane();
    std::vector<Vec> pts;
    if (inv && field.dim() >= 5) {
        Plane p = inv->through(x);
        pts = subspaceLattice(x, p.complement(), r, spacing);
    } else {
        pts = ballLattice(x, r, spacing);
    }
    if (pts.empty()) pts.push_back(x);
    return pts;
}

} // namespace

double theta(const ConnectionField& field, const Vec& x, double r, double tol) {
    MonotoneOptions opt;
    opt.quad.tol = tol;
    return theta(field, x, r, opt);
}

quad::Result thetaWithError(const ConnectionField& field, const Vec& x, double r,
                            const MonotoneOptions& opt) {
    if (!(r > 0)) throw Error("theta radius must be positive");
    const int n = field.dim();
    quad::Options q = opt.quad;
    q.tol = opt.quad.tol * std::pow(r, n - 4); // absolute tol on the weighted value
    quad::Result e = energyInBall(field, x, r, q);
    double w = std::pow(r, 4 - n);
    return {w * e.value, w * e.errorEstimate, e.evaluations};
}

double theta(const ConnectionField& field, const Vec& x, double r, const MonotoneOptions& opt) {
    return thetaWithError(field, x, r, opt).value;
}

double thetaMean(const ConnectionField& field, const Vec& x, double r,
                 const MonotoneOptions& opt) {
    return theta(field, x, r, opt) / unitBallVolume(field.dim());
}

double thetaBar(const ConnectionField& field, const Vec& x, double r, int sampleDensity,
                const MonotoneOptions& opt) {
    double spacing = r / std::max(1, sampleDensity);
    std::vector<Vec> pts = supSampleLattice(field, x, r, spacing);
    double best = -1;
    for (const Vec& y : pts) best = std::max(best, theta(field, y, r, opt));
    return best;
}

ThetaProfile thetaProfile(const ConnectionField& field, const Vec& x,
                          const std::vector<double>& rGrid, const MonotoneOptions& opt) {
    const int n = field.dim();
    ThetaProfile prof;
    prof.center = x;
    prof.r = rGrid;
    for (double r : rGrid) prof.theta.push_back(theta(field, x, r, opt));

    quad::Integrand radial = [&](const Vec& y) { return field.contractRadial(y, x); };
    for (double r : rGrid) {
        quad::Options q = opt.quad;
        q.tol = opt.quad.tol * std::pow(r, n - 4);
        quad::Result s = quad::integrate(radial, quad::SphereDomain{x, r}, q);
        prof.sphereTerm.push_back(4.0 * std::pow(r, 4 - n) * s.value);
    }
    prof.dthetaDr.assign(rGrid.size(), 0.0);
    for (size_t i = 0; i < rGrid.size(); ++i) {
        if (i == 0 || i + 1 == rGrid.size()) {
            size_t lo = (i == 0) ? 0 : i - 1;
            size_t hi = (i + 1 == rGrid.size()) ? i : i + 1;
            if (hi == lo) continue;
            prof.dthetaDr[i] = (prof.theta[hi] - prof.theta[lo]) / (prof.r[hi] - prof.r[lo]);
            continue;
        }
        // second-order centered difference on a non-uniform grid
        double hm = prof.r[i] - prof.r[i - 1];
        double hp = prof.r[i + 1] - prof.r[i];
        prof.dthetaDr[i] = (hm * hm * prof.theta[i + 1] - hp * hp * prof.theta[i - 1] +
                            (hp * hp - hm * hm) * prof.theta[i]) /
                           (hp * hm * (hp + hm));
    }
    return prof;
}

std::string ThetaProfile::toCsv() const {
    std::ostringstream os;
    os << "r,theta,dtheta_dr,sphere_term\n";
    os.precision(17);
    for (size_t i = 0; i < r.size(); ++i)
        os << r[i] << ',' << theta[i] << ',' << dthetaDr[i] << ',' << sphereTerm[i] << '\n';
    return os.str();
}

double thetaDerivativeCheck(const ConnectionField& field, const Vec& x,
                            const std::vector<double>& rGrid, const MonotoneOptions& opt) {
    ThetaProfile prof = thetaProfile(field, x, rGrid, opt);
    double scale = 1e-12;
    for (size_t i = 0; i < rGrid.size(); ++i)
        scale = std::max({scale, std::abs(prof.sphereTerm[i]), std::abs(prof.dthetaDr[i])});
    double worst = 0;
    for (size_t i = 1; i + 1 < rGrid.size(); ++i) {
        double defect = std::abs(prof.dthetaDr[i] - prof.sphereTerm[i]);
        worst = std::max(worst, defect / scale);
    }
    return worst;
}

SymmetryScore symmetryScore(const ConnectionField& field, const Ball& ball, const Plane& plane,
                            const MonotoneOptions& opt) {
    const Vec c = ball.center;
    quad::Integrand f0 = [&](const Vec& y) {
        double d2 = (y - c).norm2();
        if (d2 < 1e-28) return 0.0;
        return d2 * d2 * field.contractRadial(y, c);
    };
    quad::Options q = opt.quad;
    quad::Result r0 = quad::integrate(f0, quad::BallDomain{c, ball.radius}, q);
    quad::Result rp = planeEnergyInBall(field, plane.through(c), c, ball.radius, q);
    double vol = unitBallVolume(field.dim()) * std::pow(ball.radius, field.dim());
    SymmetryScore sc;
    sc.s0 = r0.value / vol;
    sc.sPlane = rp.value / vol;
    sc.plane = plane;
    return sc;
}

double regularityScale(const ConnectionField& field, const Vec& x, double rMax,
                       const MonotoneOptions& opt) {
    if (!(rMax > 0)) throw Error("regularityScale needs rMax > 0");
    auto holds = [&](double s) {
        double bound = 1.0 / (s * s);
        double spacing = s / 6.0;
        for (const Vec& y : supSampleLattice(field, x, s, spacing)) {
            if (std::sqrt(field.curvatureDensity(y)) > bound) return false;
        }
        return true;
    };
    if (holds(rMax)) return rMax;
    double lo = 0.0, hi = rMax;
    for (int it = 0; it < 48; ++it) {
        double mid = 0.5 * (lo + hi);
        if (mid <= 0) break;
        if (holds(mid)) lo = mid;
        else hi = mid;
    }
    return lo;
}

EpsRegReport epsRegCheck(const ConnectionField& field, const Ball& ball,
                         const MonotoneOptions& opt) {
    const int n = field.dim();
    EpsRegReport rep;
    double r2 = 2.0 * ball.radius;
    quad::Options q = opt.quad;
    q.tol = opt.quad.tol * std::pow(r2, n - 4);
    quad::Result outer = energyInBall(field, ball.center, r2, q);
    double vol2 = unitBallVolume(n) * std::pow(r2, n);
    rep.meanOuter = outer.value / vol2;
    rep.thetaOuter = std::pow(r2, 4.0) * rep.meanOuter;

    double spacing = ball.radius / 8.0;
    rep.supInner = 0.0;
    for (const Vec& y : supSampleLattice(field, ball.center, ball.radius, spacing))
        rep.supInner = std::max(rep.supInner, field.curvatureDensity(y));

    rep.hypothesis = rep.thetaOuter < opt.epsRegularity;
    rep.conclusion = rep.supInner <= opt.epsRegConstant * rep.meanOuter + 1e-15;
    rep.passes = !rep.hypothesis || rep.conclusion;
    return rep;
}

PinchedScan pinchedScan(const ConnectionField& field, const Ball& ball, double delta, double tau,
                        const MonotoneOptions& opt) {
    if (!(delta > 0 && tau > 0)) throw Error("pinchedScan needs positive delta, tau");
    const double R = ball.radius;
    const double rOuter = opt.pinchOuterFactor * R;
    const double rInner = std::max(opt.pinchInnerFactor * R, 1e-6 * R);
    const double spacing = R / std::max(1, opt.pinchLatticeDensity);

    auto inv = field.invariancePlane();
    PinchedScan scan;
    MonotoneOptions th = opt;
    th.quad.tol = std::max(opt.quad.tol, 1e-3 * delta);

    auto isPinched = [&](const Vec& y) {
        double gap = std::abs(theta(field, y, rOuter, th) - theta(field, y, rInner, th));
        return gap < delta;
    };

    if (inv && field.dim() >= 5) {
        // evaluate pinchedness on the fiber section only, then spread each
        // pinched point along the invariance directions at lattice spacing
        Plane p = inv->through(ball.center);
        std::vector<Vec> fiberPts = subspaceLattice(ball.center, p.complement(), R, spacing);
        std::vector<Vec> planeOffsets =
            subspaceLattice(Vec::zero(field.dim()), p.basis(), R, spacing);
        for (const Vec& fp : fiberPts) {
            if (!isPinched(fp)) continue;
            for (const Vec& off : planeOffsets) {
                Vec y = fp + off;
                if (ball.contains(y)) scan.pinched.push_back(y);
            }
        }
        std::sort(scan.pinched.begin(), scan.pinched.end(), lexLess);
    } else {
        for (const Vec& y : ballLattice(ball.center, R, spacing))
            if (isPinched(y)) scan.pinched.push_back(y);
    }

    const size_t cap = static_cast<size_t>(field.dim() - 4 + 1);
    for (const Vec& y : scan.pinched) {
        if (scan.independent.size() >= cap) break;
        if (scan.independent.empty() ||
            distToAffineSpan(y, scan.independent) > tau)
            scan.independent.push_back(y);
    }
    return scan;
}

std::optional<std::vector<Vec>> pinchedPointsSpan(const ConnectionField& field, const Ball& ball,
                                                  double delta, double tau,
                                                  const MonotoneOptions& opt) {
    PinchedScan scan = pinchedScan(field, ball, delta, tau, opt);
    if (scan.independent.empty()) return std::nullopt;
    return scan.independent;
}

} // namespace ym
