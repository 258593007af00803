#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include "hcurve/hppade.hpp"

using namespace hcurve;

TEST_CASE("moments are the Laurent coefficients of the log ratio") {
    HPSystem sys = solve_hp(0.3, -0.5, 0.7, 0.2, {2, 2});
    // compare against a numerically evaluated contour-free expansion:
    // f_j(1/u) expanded in u by direct series of log((1-a u)/(1-b u))
    double rho = sys.variable_scale;
    cplx a = cplx(0.3) / rho, b = cplx(-0.5) / rho;
    for (int k = 1; k <= 6; ++k) {
        cplx ak = std::pow(a, k), bk = std::pow(b, k);
        CHECK(std::abs(sys.moments[0][static_cast<std::size_t>(k)] -
                       (bk - ak) / static_cast<double>(k)) < 1e-15);
    }
    CHECK(std::abs(sys.moments[0][0]) == 0.0);
}

TEST_CASE("n = (0,0) gives the constant denominator") {
    HPSystem sys = solve_hp(1.0, -1.0, 0.5, -0.5, {0, 0});
    REQUIRE(sys.denominator.degree() == 0);
    CHECK(std::abs(sys.denominator.coeff(0) - cplx(1.0)) < 1e-15);
    CHECK(sys.zeros.roots.empty());
    CHECK_FALSE(sys.non_normal);
}

TEST_CASE("n = (1,1) on nonsymmetric integer data matches exact elimination") {
    // points a1=2, b1=-1, a2=3, b2=1: the 2x3 moment system is
    //   -3 p0 - (3/2) p1 - 3 p2 = 0
    //   -2 p0 - 4 p1 - (26/3) p2 = 0,
    // whose exact null vector gives the monic P(z) = z^2 - (20/9) z + 1/9.
    HPSystem sys = solve_hp(2.0, -1.0, 3.0, 1.0, {1, 1});
    REQUIRE(sys.denominator.degree() == 2);
    CHECK_FALSE(sys.non_normal);
    CHECK(std::abs(sys.denominator.coeff(2) - cplx(1.0)) < 1e-13);
    CHECK(std::abs(sys.denominator.coeff(1) - cplx(-20.0 / 9)) < 1e-13);
    CHECK(std::abs(sys.denominator.coeff(0) - cplx(1.0 / 9)) < 1e-13);
}

TEST_CASE("n = (1,1) on centrally symmetric data is non-normal with P = z") {
    // for {1,-1} and {1/2,-1/2} the even moments vanish, forcing p0 = p2 = 0:
    // the unique solution P(z) = z has degree 1 < 2, a non-normal index
    HPSystem sys = solve_hp(1.0, -1.0, 0.5, -0.5, {1, 1});
    CHECK(sys.non_normal);
    REQUIRE(sys.denominator.degree() == 1);
    CHECK(std::abs(sys.denominator.coeff(0)) < 1e-13);
}

TEST_CASE("defect of the order conditions stays small at n = (20,20)") {
    HPSystem sys = solve_hp(-2.0, 1.0, -1.0, 4.0, {20, 20});
    CHECK_FALSE(sys.non_normal);
    REQUIRE(sys.denominator.degree() == 40);
    // defect is measured in the scaled basis where the solved coefficient
    // vector has max-norm 1, so the bound is directly 1e-8 * ||P||
    CHECK(sys.defect < 1e-8);
}

TEST_CASE("zeros of the (20,20) denominator are real and confined") {
    HPSystem sys = solve_hp(-2.0, 1.0, -1.0, 4.0, {20, 20});
    double scale = 6.0; // max pairwise distance of the points
    int real_count = 0;
    for (const auto& r : sys.zeros.roots) {
        CHECK(std::abs(r.value) <= 2.0 * scale);
        if (std::abs(r.value.imag()) < 1e-6) ++real_count;
        CHECK(r.value.real() > -2.01);
        CHECK(r.value.real() < 4.01);
    }
    CHECK(sys.zeros.total_multiplicity() == 40);
    CHECK(real_count == 40);
    // frozen spot checks from an exact rational elimination of the system
    bool has_left = false, has_right = false;
    for (const auto& r : sys.zeros.roots) {
        if (std::abs(r.value - cplx(-1.9936)) < 5e-3) has_left = true;
        if (std::abs(r.value - cplx(3.9920)) < 5e-3) has_right = true;
    }
    CHECK(has_left);
    CHECK(has_right);
}

TEST_CASE("index bounds are enforced") {
    CHECK_THROWS_AS(solve_hp(1.0, -1.0, 2.0, -2.0, {25, 25}), Error);
    CHECK_THROWS_AS(solve_hp(1.0, -1.0, 2.0, -2.0, {-1, 2}), Error);
}
