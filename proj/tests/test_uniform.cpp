#include <catch2/catch_amalgamated.hpp>

#include <complex>
#include <random>

#include "hcurve/genus1.hpp"
#include "hcurve/uniform.hpp"

using namespace hcurve;

namespace {

std::mt19937_64 g_rng(4096);

cplx rand_cplx(double s = 1.0) {
    std::uniform_real_distribution<double> u(-s, s);
    return {u(g_rng), u(g_rng)};
}

BranchConfig random_config() {
    for (;;) {
        cplx a1 = rand_cplx(2.0), b1 = rand_cplx(2.0), a2 = rand_cplx(2.0), b2 = rand_cplx(2.0);
        double sep = 1e300;
        for (cplx x : {a1 - b1, a1 - a2, a1 - b2, b1 - a2, b1 - b2, a2 - b2})
            sep = std::min(sep, std::abs(x));
        if (sep > 0.05) return build_config(a1, b1, a2, b2);
    }
}

CubicCurve nested_symmetric_curve() {
    BranchConfig cfg = build_config(-1.0, 1.0, -3.0 / 8, 3.0 / 8);
    return build_curve(cfg, symmetric_params(1.0, 3.0 / 8));
}

} // namespace

TEST_CASE("symmetric worked example: k2 and delta2 closed forms") {
    CubicCurve cv = nested_symmetric_curve();
    HyperCurve hc = build_hyper(cv);

    // k2 = 3R^2: with d = -(a^2+b^2)/3 the constant term s2 - 3d cancels.
    REQUIRE(hc.k2.degree() == 2);
    CHECK(std::abs(hc.k2.coeff(2) - cplx(3.0)) < 1e-14);
    CHECK(std::abs(hc.k2.coeff(1)) < 1e-14);
    CHECK(std::abs(hc.k2.coeff(0)) < 1e-13);

    // delta2 = R^2 (4R^4 - (73/16) R^2 + 3601/1024)
    Poly expect = Poly{0.0, 0.0, 3601.0 / 1024, 0.0, -73.0 / 16, 0.0, 4.0};
    REQUIRE(hc.delta2.degree() == 6);
    for (int k = 0; k <= 6; ++k)
        CHECK(std::abs(hc.delta2.coeff(k) - expect.coeff(k)) < 1e-12);

    // independent route: (pi4')^2 - 4 pi4 (3R^2) reproduces the same coefficients
    Poly dp = cv.config.pi4.derivative();
    Poly alt = dp * dp - 4.0 * (cv.config.pi4 * Poly{0.0, 0.0, 3.0});
    for (int k = 0; k <= 6; ++k)
        CHECK(std::abs(alt.coeff(k) - expect.coeff(k)) < 1e-12);
}

TEST_CASE("symmetric worked example: branch points of the two-sheeted surface") {
    CubicCurve cv = nested_symmetric_curve();
    HyperCurve hc = build_hyper(cv);
    cplx e1 = std::sqrt(cplx(146.0, 110.0 * std::sqrt(3.0))) / 16.0;
    cplx e2 = std::sqrt(cplx(146.0, -110.0 * std::sqrt(3.0))) / 16.0;
    int matched = 0;
    bool zero_double = false;
    for (const auto& r : hc.eps.roots) {
        if (std::abs(r.value) < 1e-7) {
            zero_double = (r.multiplicity == 2);
            continue;
        }
        for (cplx expected : {e1, -e1, e2, -e2})
            if (std::abs(r.value - expected) < 1e-12) ++matched;
    }
    CHECK(matched == 4);
    CHECK(zero_double);
}

TEST_CASE("forward/inverse round trips and residuals over random data") {
    int tested = 0;
    while (tested < 300) {
        BranchConfig cfg = random_config();
        CubicCurve cv = build_curve(cfg, {rand_cplx(1.5), rand_cplx(1.5)});
        cplx z = rand_cplx(2.5);
        bool usable = std::abs(cfg.pi4(z)) > 1e-3;
        for (const auto& r : cv.dtilde_roots.roots)
            if (std::abs(z - r.value) < 1e-2) usable = false;
        if (!usable) continue;
        Poly cubic{2.0 * cv.p1(z), -3.0 * cv.p2(z), cplx(0.0), cfg.pi4(z)};
        RootSet hs = roots(cubic, 1e-13);
        Poly k2 = k2_poly(cfg, cv.params);
        for (const auto& hroot : hs.roots) {
            cplx h = hroot.value;
            if (std::abs(h) < 1e-6) continue;
            SurfacePoint sp = forward(cv, z, h);
            CHECK(ultra_residual(cv, sp.R, sp.Delta) <
                  1e-9 * (1.0 + std::pow(std::abs(sp.R), 6)));
            if (std::abs(k2(sp.R)) < 1e-4 || std::abs(cfg.pi4(sp.R)) < 1e-4) continue;
            SurfacePoint back = inverse(cv, sp.R, sp.Delta);
            CHECK(std::abs(back.z - z) < 1e-10 * (1.0 + std::abs(z)));
            CHECK(std::abs(back.h - h) < 1e-10 * (1.0 + std::abs(h)));
            SurfacePoint fwd2 = forward(cv, back.z, back.h);
            CHECK(std::abs(fwd2.R - sp.R) < 1e-10 * (1.0 + std::abs(sp.R)));
            CHECK(std::abs(fwd2.Delta - sp.Delta) < 1e-10 * (1.0 + std::abs(sp.Delta)));
            ++tested;
        }
    }
}

TEST_CASE("inverse: the two Delta signs give two curve points") {
    CubicCurve cv = nested_symmetric_curve();
    HyperCurve hc = build_hyper(cv);
    cplx R(0.73, 0.21);
    cplx Delta = std::sqrt(hc.delta2(R));
    SurfacePoint plus = inverse(cv, R, Delta);
    SurfacePoint minus = inverse(cv, R, -Delta);
    CHECK(std::abs(plus.z - minus.z) > 1e-6);
    CHECK(curve_residual(cv, plus.z, plus.h) < 1e-9);
    CHECK(curve_residual(cv, minus.z, minus.h) < 1e-9);
    // both h values appear among the cubic roots at their own z
    for (const SurfacePoint& sp : {plus, minus}) {
        Poly cubic{2.0 * cv.p1(sp.z), -3.0 * cv.p2(sp.z), cplx(0.0), cv.config.pi4(sp.z)};
        RootSet rs = roots(cubic, 1e-13);
        double best = 1e300;
        for (const auto& r : rs.roots) best = std::min(best, std::abs(r.value - sp.h));
        CHECK(best < 1e-9);
    }
}

TEST_CASE("forward on real points between the inner and outer edge") {
    CubicCurve cv = nested_symmetric_curve();
    for (double z : {0.45, 0.62, 0.8, 0.95}) {
        Poly cubic{2.0 * cv.p1(z), -3.0 * cv.p2(z), cplx(0.0), cv.config.pi4(z)};
        RootSet hs = roots(cubic, 1e-13);
        REQUIRE(hs.roots.size() == 3);
        for (const auto& r : hs.roots) {
            SurfacePoint sp = forward(cv, z, r.value);
            CHECK(ultra_residual(cv, sp.R, sp.Delta) < 1e-9 * (1.0 + std::pow(std::abs(sp.R), 6)));
            CHECK(curve_residual(cv, sp.z, sp.h) < 1e-9);
        }
    }
}

TEST_CASE("forward guards") {
    CubicCurve cv = nested_symmetric_curve();
    CHECK_THROWS_AS(forward(cv, cplx(2.0), cplx(1e-15)), ZeroBranch);
    CHECK_THROWS_AS(forward(cv, cplx(2.0), cplx(0.3, 0.1)), OffCurve);
}

TEST_CASE("inverse guards near singular denominators") {
    CubicCurve cv = nested_symmetric_curve();
    HyperCurve hc = build_hyper(cv);
    // K2 = 3R^2 vanishes at R = 0
    cplx R(1e-10, 0.0);
    cplx Delta = std::sqrt(hc.delta2(R));
    CHECK_THROWS_AS(inverse(cv, R, Delta), SingularDenominator);
    CHECK_THROWS_AS(inverse(cv, cplx(0.5, 0.0), cplx(123.0)), OffCurve);
    CHECK_THROWS_AS(hdz_integrand(cv, R, Delta), SingularDenominator);
    // a branch point of the two-sheeted curve: Delta = 0 there
    cplx eps1 = std::sqrt(cplx(146.0, 110.0 * std::sqrt(3.0))) / 16.0;
    CHECK_THROWS_AS(hdz_integrand(cv, eps1, cplx(0.0)), SingularDenominator);
}

TEST_CASE("hdz integrand matches finite differences of the explicit map") {
    CubicCurve cv = nested_symmetric_curve();
    HyperCurve hc = build_hyper(cv);
    for (cplx R : {cplx(0.3, 0.2), cplx(-1.6, 0.9), cplx(1.7, -0.4)}) {
        cplx Delta = std::sqrt(hc.delta2(R));
        cplx predicted = hdz_integrand(cv, R, Delta);
        double eps = 1e-6;
        SqrtTracker tr(hc.delta2, R, Delta);
        cplx dp_ = tr.advance(R + eps);
        SqrtTracker tr2(hc.delta2, R, Delta);
        cplx dm_ = tr2.advance(R - eps);
        SurfacePoint sp_p = inverse(cv, R + eps, dp_);
        SurfacePoint sp_m = inverse(cv, R - eps, dm_);
        SurfacePoint sp_0 = inverse(cv, R, Delta);
        cplx numeric = sp_0.h * (sp_p.z - sp_m.z) / (2.0 * eps);
        CHECK(std::abs(predicted - numeric) < 1e-6 * (1.0 + std::abs(predicted)));
    }
}

TEST_CASE("hdz integrand respects the R -> -R symmetry of the symmetric curve") {
    CubicCurve cv = nested_symmetric_curve();
    HyperCurve hc = build_hyper(cv);
    // delta2 is even here, so opposite points carry equal-magnitude data
    for (double t : {0.35, 0.8, 1.4}) {
        cplx R(0.0, t);
        cplx Delta = std::sqrt(hc.delta2(R));
        cplx a = hdz_integrand(cv, R, Delta);
        cplx b = hdz_integrand(cv, -R, -Delta);
        CHECK(std::abs(a + b) < 1e-10 * (1.0 + std::abs(a)));
    }
}

TEST_CASE("abelian integral of h dz: direct z-quadrature vs R-side representation") {
    CubicCurve cv = nested_symmetric_curve();
    HyperCurve hc = build_hyper(cv);

    // short regular arc in z from z0 to z1 on a fixed branch
    cplx z0(1.6, 0.5), z1(1.9, 0.8);
    Poly cubic0{2.0 * cv.p1(z0), -3.0 * cv.p2(z0), cplx(0.0), cv.config.pi4(z0)};
    cplx h = roots(cubic0, 1e-13).roots[0].value;

    const int n = 4000;
    cplx direct(0.0);
    cplx hprev = h, zprev = z0;
    std::vector<cplx> hpath(1, h);
    for (int k = 1; k <= n; ++k) {
        cplx z = z0 + (z1 - z0) * (static_cast<double>(k) / n);
        Poly cubic{2.0 * cv.p1(z), -3.0 * cv.p2(z), cplx(0.0), cv.config.pi4(z)};
        RootSet rs = roots(cubic, 1e-13);
        cplx hcur = rs.roots[0].value;
        double best = 1e300;
        for (const auto& r : rs.roots)
            if (std::abs(r.value - hprev) < best) {
                best = std::abs(r.value - hprev);
                hcur = r.value;
            }
        direct += 0.5 * (hprev + hcur) * (z - zprev);
        hprev = hcur;
        zprev = z;
    }

    // R-side: -int Delta/(2 Pi4) dR - (1/2) ln Pi4 - ln h between endpoints
    SurfacePoint sp0 = forward(cv, z0, h);
    SurfacePoint sp1 = forward(cv, z1, hprev);
    SqrtTracker tracker(hc.delta2, sp0.R, sp0.Delta);
    cplx integral(0.0);
    cplx Rprev = sp0.R, Dprev = sp0.Delta;
    for (int k = 1; k <= n; ++k) {
        cplx R = sp0.R + (sp1.R - sp0.R) * (static_cast<double>(k) / n);
        cplx D = tracker.advance(R);
        cplx fprev = Dprev / (2.0 * cv.config.pi4(Rprev));
        cplx fcur = D / (2.0 * cv.config.pi4(R));
        integral += 0.5 * (fprev + fcur) * (R - Rprev);
        Rprev = R;
        Dprev = D;
    }
    CHECK(std::abs(Dprev - sp1.Delta) < 1e-6 * (1.0 + std::abs(sp1.Delta)));
    cplx rside = -integral - 0.5 * (std::log(cv.config.pi4(sp1.R)) - std::log(cv.config.pi4(sp0.R))) -
                 (std::log(sp1.h) - std::log(sp0.h));
    CHECK(std::abs(direct - rside) < 1e-6 * (1.0 + std::abs(direct)));
}

TEST_CASE("three branch images stay delta2-consistent") {
    for (int trial = 0; trial < 50; ++trial) {
        BranchConfig cfg = random_config();
        CubicCurve cv = build_curve(cfg, {rand_cplx(1.5), rand_cplx(1.5)});
        HyperCurve hc = build_hyper(cv);
        cplx z = rand_cplx(2.0);
        if (std::abs(cfg.pi4(z)) < 1e-2) continue;
        Poly cubic{2.0 * cv.p1(z), -3.0 * cv.p2(z), cplx(0.0), cfg.pi4(z)};
        RootSet hs = roots(cubic, 1e-13);
        int plus = 0, minus = 0;
        for (const auto& r : hs.roots) {
            if (std::abs(r.value) < 1e-6) continue;
            SurfacePoint sp = forward(cv, z, r.value);
            cplx p = std::sqrt(hc.delta2(sp.R));
            double dplus = std::abs(sp.Delta - p), dminus = std::abs(sp.Delta + p);
            CHECK(std::min(dplus, dminus) < 1e-8 * (1.0 + std::abs(p)));
            (dplus <= dminus ? plus : minus)++;
        }
        CHECK(std::max(plus, minus) >= 2); // at least two sheets share a sign
    }
}
