#include <doctest.h>

#include <cmath>

#include "ym/fields.hpp"

using namespace ym;

namespace {

// deterministic LCG for reproducible "random" sample points
struct Lcg {
    std::uint64_t s = 0x243f6a8885a308d3ULL;
    double next() { // in [0,1)
        s = s * 6364136223846793005ULL + 1442695040888963407ULL;
        return (s >> 11) * 0x1.0p-53;
    }
    double range(double a, double b) { return a + (b - a) * next(); }
    Vec point(int n, double a, double b) {
        Vec v = Vec::zero(n);
        for (int i = 0; i < n; ++i) v[i] = range(a, b);
        return v;
    }
};

Plane planeN5() {
    // the e1 axis as invariance direction in R^5
    return Plane(Vec::zero(5), {Vec::axis(5, 0)});
}

} // namespace

TEST_CASE("flat field: zero curvature everywhere") {
    auto f = ConnectionField::flat(5);
    Lcg rng;
    for (int i = 0; i < 10; ++i) {
        Vec x = rng.point(5, -2, 2);
        CHECK(f.curvatureDensity(x) == 0.0);
        CHECK(f.curvature(x).densityNorm2() == 0.0);
    }
}

TEST_CASE("bpst density closed form: 192 at the center, 12 on the unit sphere") {
    auto f = ConnectionField::bpst(Vec::zero(4), 1.0);
    CHECK(f.curvatureDensity(Vec::zero(4)) == doctest::Approx(192.0).epsilon(1e-12));
    Vec x{1.0, 0.0, 0.0, 0.0};
    CHECK(f.curvatureDensity(x) == doctest::Approx(12.0).epsilon(1e-12));
    // analytic curvature agrees with the composed dA + [A,A] evaluation
    CurvatureTensor F = f.curvature(x);
    CHECK(F.densityNorm2() == doctest::Approx(12.0).epsilon(1e-10));
}

TEST_CASE("bpst scaling symmetry of the density") {
    Lcg rng;
    double lam = 0.37;
    auto fl = ConnectionField::bpst(Vec::zero(4), lam);
    auto f1 = ConnectionField::bpst(Vec::zero(4), 1.0);
    for (int i = 0; i < 20; ++i) {
        Vec y = rng.point(4, -2, 2);
        Vec ly = lam * y;
        double lhs = fl.curvatureDensity(ly);
        double rhs = f1.curvatureDensity(y) / (lam * lam * lam * lam);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
    }
}

TEST_CASE("curvature antisymmetry is exact by construction") {
    auto f = ConnectionField::bpst(Vec{0.1, -0.2, 0.3, 0.0}, 0.8);
    Lcg rng;
    for (int i = 0; i < 5; ++i) {
        CurvatureTensor F = f.curvature(rng.point(4, -1, 1));
        for (int mu = 0; mu < 4; ++mu)
            for (int nu = 0; nu < 4; ++nu)
                for (int a = 0; a < 3; ++a) CHECK(F.at(mu, nu)[a] == -F.at(nu, mu)[a]);
    }
}

TEST_CASE("finite-difference consistency: analytic F vs dA + [A,A] from the potential") {
    auto f = ConnectionField::bpst(Vec{0.05, 0.0, -0.1, 0.2}, 1.0);
    Lcg rng;
    const double h = 1e-4;
    int checked = 0;
    while (checked < 50) {
        Vec x = rng.point(4, -3, 3);
        Vec c{0.05, 0.0, -0.1, 0.2};
        double d = (x - c).norm();
        if (d < 0.1 || d > 3.0) continue;
        ++checked;
        CurvatureTensor Fa = f.curvature(x);
        LieValue A[kMaxDim];
        f.potential(x, A);
        for (int mu = 0; mu < 4; ++mu)
            for (int nu = mu + 1; nu < 4; ++nu) {
                Vec xp = x, xm = x;
                xp[mu] += h;
                xm[mu] -= h;
                LieValue Ap[kMaxDim], Am[kMaxDim];
                f.potential(xp, Ap);
                f.potential(xm, Am);
                LieValue dmuAnu = (1.0 / (2 * h)) * (Ap[nu] - Am[nu]);
                xp = x, xm = x;
                xp[nu] += h;
                xm[nu] -= h;
                f.potential(xp, Ap);
                f.potential(xm, Am);
                LieValue dnuAmu = (1.0 / (2 * h)) * (Ap[mu] - Am[mu]);
                LieValue Ffd = dmuAnu - dnuAmu + bracket(A[mu], A[nu]);
                LieValue diff = Ffd - Fa.at(mu, nu);
                double scale = std::max(Fa.at(mu, nu).norm(), 1e-8);
                CHECK(diff.norm() / scale < 1e-5);
            }
    }
}

TEST_CASE("extended field: exact plane invariance of the contraction") {
    Plane L = planeN5();
    auto f = ConnectionField::extended(ConnectionField::bpst(Vec::zero(4), 1.0), L);
    Lcg rng;
    for (int i = 0; i < 100; ++i) {
        Vec x = rng.point(5, -2, 2);
        CHECK(f.contractPlane(x, L) <= 1e-12);
    }
}

TEST_CASE("extended field: density constant along the invariance direction") {
    Plane L = planeN5();
    auto f = ConnectionField::extended(ConnectionField::bpst(Vec::zero(4), 0.5), L);
    Lcg rng;
    for (int i = 0; i < 20; ++i) {
        Vec x = rng.point(5, -1, 1);
        Vec y = x;
        y[0] += rng.range(-3, 3);
        CHECK(f.curvatureDensity(x) == doctest::Approx(f.curvatureDensity(y)).epsilon(1e-12));
    }
}

TEST_CASE("extended field: radial contraction vanishes along the symmetry plane") {
    Plane L = planeN5();
    auto f = ConnectionField::extended(ConnectionField::bpst(Vec::zero(4), 1.0), L);
    Vec origin = Vec::zero(5);
    Vec x = Vec::zero(5);
    x[0] = 1.3; // on the plane through the bubble center
    CHECK(f.contractRadial(x, origin) <= 1e-12);
}

TEST_CASE("tilted plane contraction grows with the tilt angle") {
    Plane L = planeN5();
    auto f = ConnectionField::extended(ConnectionField::bpst(Vec::zero(4), 1.0), L);
    auto tilted = [&](double alpha) {
        Vec d = Vec::zero(5);
        d[0] = std::cos(alpha);
        d[1] = std::sin(alpha);
        return Plane(Vec::zero(5), {d});
    };
    Vec x{0.3, 0.4, -0.2, 0.1, 0.5};
    double v0 = f.contractPlane(x, tilted(0.0));
    double v1 = f.contractPlane(x, tilted(0.1));
    double v2 = f.contractPlane(x, tilted(0.2));
    double v3 = f.contractPlane(x, tilted(0.3));
    CHECK(v0 <= 1e-12);
    CHECK(v1 > 0);
    CHECK(v2 > v1);
    CHECK(v3 > v2);
}

TEST_CASE("superposition: near one bubble the density matches the single field") {
    Plane L1 = planeN5();
    Vec base2 = Vec::zero(5);
    base2[1] = 120.0; // far separation, influence tubes are 50*lambda
    Plane L2 = L1.through(base2);
    auto b1 = ConnectionField::extended(ConnectionField::bpst(Vec::zero(4), 1.0), L1);
    auto b2 = ConnectionField::extended(ConnectionField::bpst(Vec::zero(4), 1.0), L2);
    auto sup = ConnectionField::superposition({b1, b2});
    Lcg rng;
    for (int i = 0; i < 10; ++i) {
        Vec x = rng.point(5, -1.5, 1.5);
        double s = sup.curvatureDensity(x);
        double single = b1.curvatureDensity(x);
        CHECK(std::abs(s - single) < 1e-9 * std::max(1.0, single));
    }
}

TEST_CASE("superposition rejects overlapping influence tubes") {
    Plane L1 = planeN5();
    Vec base2 = Vec::zero(5);
    base2[1] = 0.5;
    Plane L2 = L1.through(base2);
    auto b1 = ConnectionField::extended(ConnectionField::bpst(Vec::zero(4), 1.0), L1);
    auto b2 = ConnectionField::extended(ConnectionField::bpst(Vec::zero(4), 1.0), L2);
    CHECK_THROWS(ConnectionField::superposition({b1, b2}));
}

TEST_CASE("blow-up scaling law holds to 1e-12") {
    auto f = ConnectionField::bpst(Vec{0.2, 0.0, 0.0, -0.1}, 0.7);
    Vec c{0.1, 0.1, 0.0, 0.0};
    double r = 0.35;
    auto g = ConnectionField::blowUp(f, c, r);
    Lcg rng;
    for (int i = 0; i < 50; ++i) {
        Vec y = rng.point(4, -2, 2);
        double lhs = g.curvatureDensity(y);
        double rhs = std::pow(r, 4) * f.curvatureDensity(c + r * y);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
    }
}

TEST_CASE("blow-up of bpst at its own scale matches the unit instanton") {
    double lam = 0.05;
    Vec c = Vec::zero(4);
    auto f = ConnectionField::bpst(c, lam);
    auto g = ConnectionField::blowUp(f, c, lam);
    auto unit = ConnectionField::bpst(c, 1.0);
    Lcg rng;
    for (int i = 0; i < 30; ++i) {
        Vec y = rng.point(4, -2, 2);
        CHECK(g.curvatureDensity(y) ==
              doctest::Approx(unit.curvatureDensity(y)).epsilon(1e-9));
    }
}

TEST_CASE("blow-up of flat stays flat") {
    auto f = ConnectionField::flat(4);
    auto g = ConnectionField::blowUp(f, Vec::zero(4), 3.0);
    CHECK(g.curvatureDensity(Vec{1, 1, 0, 0}) == 0.0);
}

TEST_CASE("covariant derivative norms: flat zero, bpst center critical point") {
    auto flat = ConnectionField::flat(4);
    auto [g0, h0] = flat.covariantDerivativeNorms(Vec{0.3, 0, 0, 0});
    CHECK(g0 == 0.0);
    CHECK(h0 == 0.0);

    auto f = ConnectionField::bpst(Vec::zero(4), 1.0);
    auto [g1, h1] = f.covariantDerivativeNorms(Vec::zero(4), 1);
    // radial symmetry forces a vanishing first covariant derivative at the center
    CHECK(g1 < 1e-5);
    CHECK(h1 == 0.0);
}

TEST_CASE("covariant derivative scaling: |grad F| at lam*x scales like lam^-3") {
    double lam = 0.5;
    auto fl = ConnectionField::bpst(Vec::zero(4), lam);
    auto f1 = ConnectionField::bpst(Vec::zero(4), 1.0);
    Lcg rng;
    for (int i = 0; i < 5; ++i) {
        Vec x = rng.point(4, 0.3, 1.5);
        auto [gl, hl] = fl.covariantDerivativeNorms(lam * x);
        auto [g1, h1] = f1.covariantDerivativeNorms(x);
        CHECK(gl == doctest::Approx(g1 / (lam * lam * lam)).epsilon(1e-3));
        CHECK(hl == doctest::Approx(h1 / (lam * lam * lam * lam)).epsilon(1e-3));
    }
}

TEST_CASE("dimension mismatch is rejected") {
    auto f = ConnectionField::bpst(Vec::zero(4), 1.0);
    CHECK_THROWS_AS(f.curvatureDensity(Vec::zero(5)), DimensionMismatch);
    CHECK_THROWS(f.contractRadial(Vec::zero(4), Vec::zero(4)));
    CHECK_THROWS(ConnectionField::blowUp(f, Vec::zero(4), -1.0));
}

TEST_CASE("closed-form energy fraction oracle behaves") {
    CHECK(bpst::energyFraction(1.0, 1.0) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(bpst::energyFraction(1e6, 1.0) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(bpst::energyFraction(0.0, 1.0) == doctest::Approx(0.0));
}
