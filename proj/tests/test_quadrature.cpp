#include <doctest.h>

#include <cmath>
#include <cstring>

#include "ym/fieldquad.hpp"
#include "ym/quadrature.hpp"

using namespace ym;
using quad::integrate;

namespace {
const double kPi2 = kPi * kPi;

struct OracleCase {
    const char* name;
    quad::Domain domain;
    quad::Integrand f;
    double exact;
    double fineTol = 1e-9;
};

std::vector<OracleCase> oracleBattery() {
    Vec c4 = Vec::zero(4);
    Vec c5 = Vec::zero(5);
    std::vector<OracleCase> cases;
    cases.push_back({"vol4", quad::BallDomain{c4, 1.0}, [](const Vec&) { return 1.0; }, kPi2 / 2});
    cases.push_back({"x1sq", quad::BallDomain{c4, 1.0}, [](const Vec& x) { return x[0] * x[0]; },
                     kPi2 / 12});
    cases.push_back({"r2", quad::BallDomain{c4, 1.0}, [](const Vec& x) { return x.norm2(); },
                     kPi2 / 3});
    cases.push_back({"gauss", quad::BallDomain{c4, 1.0},
                     [](const Vec& x) { return std::exp(-x.norm2()); },
                     2 * kPi2 * (0.5 - std::exp(-1.0))});
    cases.push_back({"bpst_profile", quad::BallDomain{c4, 1.0},
                     [](const Vec& x) { return std::pow(1.0 + x.norm2(), -4.0); }, kPi2 / 12});
    cases.push_back({"x1quart", quad::BallDomain{c4, 1.0},
                     [](const Vec& x) { return std::pow(x[0], 4.0); }, kPi2 / 32});
    cases.push_back({"absr", quad::BallDomain{c4, 1.0}, [](const Vec& x) { return x.norm(); },
                     2 * kPi2 / 5});
    cases.push_back({"vol5", quad::BallDomain{c5, 1.0}, [](const Vec&) { return 1.0; },
                     8 * kPi2 / 15, 1e-7});
    cases.push_back({"area3", quad::SphereDomain{c4, 1.0}, [](const Vec&) { return 1.0; },
                     2 * kPi2});
    cases.push_back({"offcenter", quad::BallDomain{c4, 1.0},
                     [](const Vec& x) { return (x[0] - 0.3) * (x[0] - 0.3); },
                     kPi2 / 12 + 0.09 * kPi2 / 2});
    return cases;
}

} // namespace

TEST_CASE("unit ball volume and sphere area") {
    quad::Options opt;
    opt.tol = 1e-8;
    auto r = integrate([](const Vec&) { return 1.0; }, quad::BallDomain{Vec::zero(4), 1.0}, opt);
    CHECK(r.value == doctest::Approx(kPi2 / 2).epsilon(1e-8));
    CHECK(r.errorEstimate <= 1e-7);

    auto s = integrate([](const Vec&) { return 1.0; }, quad::SphereDomain{Vec::zero(4), 1.0}, opt);
    CHECK(s.value == doctest::Approx(2 * kPi2).epsilon(1e-8));
}

TEST_CASE("bpst energy in a 10-lambda ball matches the radial oracle") {
    double lam = 0.2;
    Vec c{0.1, 0.0, -0.05, 0.0};
    auto f = ConnectionField::bpst(c, lam);
    quad::Options opt;
    opt.tol = 1e-6;
    auto r = quad::integrate([&](const Vec& x) { return f.curvatureDensity(x); },
                             quad::BallDomain{c, 10 * lam}, opt);
    double oracle = bpst::totalEnergy() * bpst::energyFraction(10 * lam, lam);
    CHECK(r.value >= 0.99 * bpst::totalEnergy());
    CHECK(r.value == doctest::Approx(oracle).epsilon(1e-5));
}

TEST_CASE("slice-ball integral equals the 4d fiber integral for invariant fields") {
    Plane L(Vec::zero(5), {Vec::axis(5, 0)});
    double lam = 0.1;
    auto inner = ConnectionField::bpst(Vec::zero(4), lam);
    auto ext = ConnectionField::extended(inner, L);
    quad::Options opt;
    opt.tol = 1e-7;
    auto slice = sliceEnergy(ext, L, Vec::zero(5), 10 * lam, opt);
    auto ball4 = quad::integrate([&](const Vec& u) { return inner.curvatureDensity(u); },
                                 quad::BallDomain{Vec::zero(4), 10 * lam}, opt);
    CHECK(slice.value == doctest::Approx(ball4.value).epsilon(1e-6));
}

TEST_CASE("radial profile of the bpst density decreases beyond lambda") {
    double lam = 0.5;
    auto f = ConnectionField::bpst(Vec::zero(4), lam);
    quad::Options opt;
    opt.tol = 1e-7;
    auto prof = quad::radialProfile([&](const Vec& x) { return f.curvatureDensity(x); },
                                    Vec::zero(4), {lam, 2 * lam, 4 * lam}, opt);
    auto exact = [&](double r) { return 2 * kPi2 * r * r * r * bpst::density(r * r, lam); };
    CHECK(prof[0].value == doctest::Approx(exact(lam)).epsilon(1e-6));
    CHECK(prof[1].value == doctest::Approx(exact(2 * lam)).epsilon(1e-6));
    CHECK(prof[0].value > prof[1].value);
    CHECK(prof[1].value > prof[2].value);

    auto flat = ConnectionField::flat(4);
    auto zero = quad::radialProfile([&](const Vec& x) { return flat.curvatureDensity(x); },
                                    Vec::zero(4), {0.5, 1.0}, opt);
    CHECK(zero[0].value == 0.0);
    CHECK(zero[1].value == 0.0);
}

TEST_CASE("additivity: ball = smaller ball + annulus within error estimates") {
    auto f = [](const Vec& x) { return std::exp(-2.0 * x.norm2()) + 0.3 * x[1] * x[1]; };
    Vec c = Vec::zero(4);
    quad::Options opt;
    opt.tol = 1e-8;
    auto whole = integrate(f, quad::BallDomain{c, 1.0}, opt);
    auto inner = integrate(f, quad::BallDomain{c, 0.6}, opt);
    auto ring = integrate(f, quad::AnnulusDomain{c, 0.6, 1.0}, opt);
    double gap = std::abs(whole.value - inner.value - ring.value);
    CHECK(gap <= whole.errorEstimate + inner.errorEstimate + ring.errorEstimate + 1e-12);
}

TEST_CASE("refinement monotonicity on the closed-form battery") {
    for (auto& cs : oracleBattery()) {
        CAPTURE(cs.name);
        quad::Options loose, tight;
        loose.tol = 1e-4;
        tight.tol = 5e-5;
        double e1 = std::abs(integrate(cs.f, cs.domain, loose).value - cs.exact);
        double e2 = std::abs(integrate(cs.f, cs.domain, tight).value - cs.exact);
        CHECK(e2 <= e1 + 1e-14);
        quad::Options fine;
        fine.tol = cs.fineTol;
        double e3 = std::abs(integrate(cs.f, cs.domain, fine).value - cs.exact);
        CHECK(e3 <= 100 * cs.fineTol * std::max(1.0, std::abs(cs.exact)));
    }
}

TEST_CASE("shell integral converges to the level-set area at O(h^2)") {
    // b(y) = |y| in n=4, exact shell value sigma3 (r^3 + r h^2/4)
    Vec c = Vec::zero(4);
    double r = 0.7;
    auto one = [](const Vec&) { return 1.0; };
    auto level = [](const Vec& y) { return y.norm(); };
    auto grad = [](const Vec& y) { return (1.0 / y.norm()) * y; };
    double exact = 2 * kPi2 * r * r * r;
    double prevErr = 0;
    int k = 0;
    for (double h : {0.1, 0.05, 0.025}) {
        quad::ShellDomain sh{level, grad, r, h,
                             {quad::AnnulusDomain{c, r - h, r + h}}};
        quad::Options opt;
        opt.tol = 2e-6; // well below the smallest coarea defect being measured
        opt.budgetPolicy = quad::BudgetPolicy::ReturnBest;
        auto v = integrate(one, quad::Domain{sh}, opt);
        CHECK(v.errorEstimate < 1e-4);
        double err = std::abs(v.value - exact);
        double predicted = 2 * kPi2 * r * h * h / 4.0;
        CHECK(err == doctest::Approx(predicted).epsilon(0.02));
        if (k > 0) CHECK(prevErr / err == doctest::Approx(4.0).epsilon(0.05));
        prevErr = err;
        ++k;
    }
    quad::ShellDomain sh{level, grad, r, 0.1, {quad::AnnulusDomain{c, r - 0.1, r + 0.1}}};
    quad::Options opt;
    opt.tol = 2e-6;
    opt.budgetPolicy = quad::BudgetPolicy::ReturnBest;
    auto rich = quad::shellIntegralRichardson(one, sh, opt);
    CHECK(std::abs(rich.value - exact) < 2e-4);
}

TEST_CASE("determinism: identical inputs give bit-identical results") {
    auto f = [](const Vec& x) { return std::cos(3.0 * x[0]) * std::exp(-x.norm2()); };
    quad::Options opt;
    opt.tol = 1e-9;
    auto a = integrate(f, quad::BallDomain{Vec::zero(4), 1.0}, opt);
    auto b = integrate(f, quad::BallDomain{Vec::zero(4), 1.0}, opt);
    CHECK(std::memcmp(&a.value, &b.value, sizeof(double)) == 0);
    CHECK(a.evaluations == b.evaluations);
}

TEST_CASE("error taxonomy: non-finite integrand and evaluation budget") {
    auto bad = [](const Vec& x) { return 1.0 / (x[0] - x[0]); };
    CHECK_THROWS_AS(integrate(bad, quad::BallDomain{Vec::zero(4), 1.0}, {}), NonFinite);

    auto rough = [](const Vec& x) { return std::cos(80.0 * x.norm2()) * std::cos(40.0 * x[1]); };
    quad::Options tiny;
    tiny.tol = 1e-12;
    tiny.evalCap = 20'000;
    CHECK_THROWS_AS(integrate(rough, quad::BallDomain{Vec::zero(4), 1.0}, tiny), BudgetExceeded);
    tiny.budgetPolicy = quad::BudgetPolicy::ReturnBest;
    auto best = integrate(rough, quad::BallDomain{Vec::zero(4), 1.0}, tiny);
    CHECK(std::isfinite(best.value));
}

TEST_CASE("invariant reduction agrees with direct 5d quadrature") {
    Plane L(Vec::zero(5), {Vec::axis(5, 0)});
    auto ext = ConnectionField::extended(ConnectionField::bpst(Vec::zero(4), 0.3), L);
    Vec x{0.2, 0.1, 0.0, -0.1, 0.0};
    quad::Options opt;
    opt.tol = 1e-4;
    auto reduced = energyInBall(ext, x, 0.8, opt);
    quad::Options direct;
    direct.tol = 5e-3;
    direct.evalCap = 40'000'000;
    direct.budgetPolicy = quad::BudgetPolicy::ReturnBest;
    auto full = quad::integrate([&](const Vec& y) { return ext.curvatureDensity(y); },
                                quad::BallDomain{x, 0.8}, direct);
    CHECK(reduced.value == doctest::Approx(full.value).epsilon(2e-3));
}
