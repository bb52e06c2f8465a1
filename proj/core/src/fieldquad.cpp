#include "ym/fieldquad.hpp"

#include <cmath>

namespace ym {
namespace {

void accumulate(quad::Result& total, const quad::Result& part) {
    total.value += part.value;
    total.errorEstimate += part.errorEstimate;
    total.evaluations += part.evaluations;
}

} // namespace

quad::Result ballIntegralWithCores(const quad::Integrand& f, const Vec& center, double R,
                                   const std::vector<CoreBall>& cores, const quad::Options& opt) {
    std::vector<CoreBall> active;
    for (const CoreBall& c : cores) {
        double d = (c.center - center).norm();
        if (d >= R + c.radius) continue; // no overlap with the domain
        if (c.radius > 0.25 * R) continue; // wide enough for the plain rule
        active.push_back(c);
    }
    if (active.empty()) return quad::integrate(f, quad::BallDomain{center, R}, opt);

    quad::Options sub = opt;
    sub.tol = opt.tol / static_cast<double>(active.size() + 1);
    quad::Result total;
    const double R2 = R * R;
    for (const CoreBall& c : active) {
        quad::Integrand clipped = [&f, center, R2](const Vec& y) {
            return ((y - center).norm2() <= R2) ? f(y) : 0.0;
        };
        accumulate(total, quad::integrate(clipped, quad::BallDomain{c.center, c.radius}, sub));
    }
    quad::Integrand punched = [&f, &active](const Vec& y) {
        for (const CoreBall& c : active)
            if ((y - c.center).norm2() < c.radius * c.radius) return 0.0;
        return f(y);
    };
    accumulate(total, quad::integrate(punched, quad::BallDomain{center, R}, sub));
    return total;
}

quad::Result invariantBallIntegral(const quad::Integrand& f, const Plane& plane, const Vec& center,
                                   double radius, const std::vector<CoreBall>& cores4,
                                   const quad::Options& opt) {
    const int m = plane.dim();
    Vec u0 = plane.fiberCoords(center);
    const auto& Q = plane.complement();
    auto fiberPoint = [&](const Vec& u4) {
        Vec p = center;
        for (int i = 0; i < 4; ++i) p += (u4[i] - u0[i]) * Q[i];
        return p;
    };
    quad::Integrand f4 = [&f, fiberPoint](const Vec& u4) { return f(fiberPoint(u4)); };
    if (m == 0) return ballIntegralWithCores(f4, u0, radius, cores4, opt);

    quad::Options inner = opt;
    inner.tol = opt.tol / (4.0 * std::max(1.0, unitSphereArea(m) * std::pow(radius, m)));
    inner.budgetPolicy = quad::BudgetPolicy::ReturnBest;

    std::int64_t evals = 0;
    double worstInner = 0;
    quad::Integrand profile = [&](const Vec& t1) -> double {
        double t = t1[0];
        double rho = std::sqrt(std::max(radius * radius - t * t, 0.0));
        if (rho <= 1e-300) return 0.0;
        quad::Result g = ballIntegralWithCores(f4, u0, rho, cores4, inner);
        evals += g.evaluations;
        worstInner = std::max(worstInner, g.errorEstimate);
        double w = unitSphereArea(m) * std::pow(t, m - 1);
        return w * g.value;
    };
    quad::Options outer = opt;
    outer.tol = opt.tol / 2.0;
    outer.budgetPolicy = quad::BudgetPolicy::ReturnBest;
    quad::Result r = quad::integrate(profile, quad::IntervalDomain{0.0, radius}, outer);
    r.evaluations += evals;
    r.errorEstimate += worstInner * unitBallVolume(m) * std::pow(radius, m);
    return r;
}

std::vector<CoreBall> fiberCores(const ConnectionField& field, const Plane& plane) {
    std::vector<CoreBall> out;
    for (const auto& [c, lam] : field.concentrationCenters())
        out.push_back({plane.fiberCoords(c), 50.0 * lam});
    return out;
}

std::vector<CoreBall> ambientCores(const ConnectionField& field) {
    std::vector<CoreBall> out;
    for (const auto& [c, lam] : field.concentrationCenters()) out.push_back({c, 50.0 * lam});
    return out;
}

quad::Result energyInBall(const ConnectionField& field, const Vec& x, double r,
                          const quad::Options& opt) {
    quad::Integrand f = [&field](const Vec& y) { return field.curvatureDensity(y); };
    auto inv = field.invariancePlane();
    if (inv && field.dim() >= 5)
        return invariantBallIntegral(f, *inv, x, r, fiberCores(field, *inv), opt);
    return ballIntegralWithCores(f, x, r, ambientCores(field), opt);
}

quad::Result planeEnergyInBall(const ConnectionField& field, const Plane& L, const Vec& x, double r,
                               const quad::Options& opt) {
    auto inv = field.invariancePlane();
    if (inv && L.sameSpan(inv->through(L.base()), 1e-10)) {
        // exactly invariant directions: the contraction vanishes identically
        return {0.0, 0.0, 0};
    }
    quad::Integrand f = [&field, &L](const Vec& y) { return field.contractPlane(y, L); };
    if (inv && field.dim() >= 5)
        return invariantBallIntegral(f, *inv, x, r, fiberCores(field, *inv), opt);
    return ballIntegralWithCores(f, x, r, ambientCores(field), opt);
}

quad::Result sliceEnergy(const ConnectionField& field, const Plane& plane, const Vec& q,
                         double radius, const quad::Options& opt,
                         const std::function<bool(const Vec&)>& restriction) {
    // work in the 4d fiber coordinates of the slice through q
    const auto& Q = plane.complement();
    auto toAmbient = [&](const Vec& u4) {
        Vec p = q;
        for (int i = 0; i < 4; ++i) p += u4[i] * Q[i];
        return p;
    };
    quad::Integrand f4 = [&](const Vec& u4) {
        Vec p = toAmbient(u4);
        if (restriction && !restriction(p)) return 0.0;
        return field.curvatureDensity(p);
    };
    // cores where bubble axes pierce this slice
    std::vector<CoreBall> cores;
    for (const auto& [c, lam] : field.concentrationCenters()) {
        Vec d = c - q;
        Vec u = Vec::zero(4);
        for (int i = 0; i < 4; ++i) u[i] = d.dot(Q[i]);
        cores.push_back({u, 50.0 * lam});
    }
    return ballIntegralWithCores(f4, Vec::zero(4), radius, cores, opt);
}

quad::Result totalEnergy4d(const ConnectionField& field, const quad::Options& opt) {
    if (field.dim() != 4) throw DimensionMismatch("totalEnergy4d needs a 4d field");
    auto centers = field.concentrationCenters();
    Vec c = Vec::zero(4);
    double scale = 1.0;
    if (!centers.empty()) {
        for (const auto& [x, lam] : centers) {
            c += (1.0 / centers.size()) * x;
            scale = std::max(scale, lam);
        }
        double spread = 0;
        for (const auto& [x, lam] : centers) spread = std::max(spread, (x - c).norm());
        scale = std::max(scale, spread);
    }
    double R = 60.0 * scale;
    quad::Integrand f = [&field](const Vec& y) { return field.curvatureDensity(y); };
    return ballIntegralWithCores(f, c, R, ambientCores(field), opt);
}

} // namespace ym
