#include <catch2/catch_amalgamated.hpp>

#include "selberg/oracle.hpp"
#include "support/reference.hpp"

using namespace selberg;

TEST_CASE("direct_series classical values for zeta") {
    auto d = zeta_datum();
    cplx v = direct_series(d, cplx(2, 0), 0);
    CHECK(std::abs(v - cplx(constants::pi * constants::pi / 6.0, 0)) < 1e-10);
    cplx v1 = direct_series(d, cplx(2, 0), 1);
    CHECK(std::abs(v1 - cplx(testref::zeta_prime_2, 0)) < 1e-10);
}

TEST_CASE("direct_series conjugate pairs (Schwarz reflection)") {
    OracleConfig cfg;
    cfg.target_abs_tol = 1e-5; // bound-only tails for the cusp-form sources
    for (const auto& d : {zeta_datum(), delta_datum(), rankin_selberg_delta_datum()}) {
        cplx a = direct_series(d, cplx(3, 5), 0, cfg);
        cplx b = direct_series(d, cplx(3, -5), 0, cfg);
        CHECK(std::abs(a - std::conj(b)) < 1e-12 * std::max(1.0, std::abs(a)));
    }
}

TEST_CASE("direct_series domain and capacity errors") {
    CHECK_THROWS_AS(direct_series(zeta_datum(), cplx(0.9, 10), 0), domain_error);
    OracleConfig tight;
    tight.max_terms = 50;
    tight.target_abs_tol = 1e-13;
    try {
        direct_series(delta_datum(), cplx(1.2, 0), 0, tight);
        FAIL("expected capacity error");
    } catch (const capacity_error& e) {
        CHECK(e.achieved() > 1e-13);
    }
}

TEST_CASE("euler_maclaurin_zeta against frozen strip references") {
    CHECK(std::abs(euler_maclaurin_zeta(cplx(2, 0), 0) -
                   cplx(constants::pi * constants::pi / 6.0, 0)) < 1e-12);
    CHECK(std::abs(euler_maclaurin_zeta(cplx(0.5, 30), 0) - testref::zeta_05_30i) < 1e-12);
    CHECK(std::abs(euler_maclaurin_zeta(cplx(0.5, 30), 1) - testref::zeta1_05_30i) < 1e-12);
    CHECK(std::abs(euler_maclaurin_zeta(cplx(0.5, 30), 2) - testref::zeta2_05_30i) < 1e-11);
    CHECK(std::abs(euler_maclaurin_zeta(cplx(0.25, 77.7), 0) - testref::zeta_025_777i) < 1e-12);
    CHECK(std::abs(euler_maclaurin_zeta(cplx(1.0, 200), 1) - testref::zeta1_10_200i) < 1e-11);
    CHECK(std::abs(euler_maclaurin_zeta(cplx(0.0, 60), 0) - testref::zeta_00_60i) < 1e-12);
    CHECK(std::abs(euler_maclaurin_zeta(cplx(0.75, 123.4), 2) - testref::zeta2_075_1234i) < 1e-11);
}

TEST_CASE("euler_maclaurin_zeta vanishes near the first zero") {
    CHECK(std::abs(euler_maclaurin_zeta(cplx(0.5, 14.1347), 0)) <= 1e-3);
}

TEST_CASE("euler_maclaurin_zeta agrees with direct series at sigma = 2") {
    auto d = zeta_datum();
    for (int m = 0; m <= 3; ++m) {
        cplx em = euler_maclaurin_zeta(cplx(2, 7), m);
        cplx ds = direct_series(d, cplx(2, 7), m);
        CHECK(std::abs(em - ds) < 1e-11 * std::max(1.0, std::abs(ds)));
    }
}

TEST_CASE("euler_maclaurin_zeta pole guard") {
    CHECK_THROWS_AS(euler_maclaurin_zeta(cplx(1, 0), 0), domain_error);
}

TEST_CASE("cauchy_circle derivative extraction") {
    OracleConfig cfg;
    SECTION("all derivatives of exp at 0") {
        cplx v = cauchy_circle([](cplx z) { return std::exp(z); }, cplx(0, 0), 3, cfg);
        CHECK(std::abs(v - cplx(1, 0)) < 1e-12);
    }
    SECTION("degree bound on polynomials") {
        cplx v = cauchy_circle([](cplx z) { return z * z; }, cplx(0.3, 0.2), 3, cfg);
        CHECK(std::abs(v) < 1e-12);
    }
    SECTION("exact on polynomials up to degree 5") {
        auto poly = [](cplx z) {
            return 2.0 + z * (1.5 + z * (-0.5 + z * (3.0 + z * (0.25 + z * 1.0))));
        };
        // 3rd derivative at s: 6*3 + 24*0.25 s + 60 s^2
        cplx s(0.4, -0.3);
        cplx expect = 18.0 + 6.0 * s + 60.0 * s * s;
        cplx v = cauchy_circle(poly, s, 3, cfg);
        CHECK(std::abs(v - expect) < 1e-11 * std::abs(expect));
    }
}

TEST_CASE("cauchy_circle validates derivative of euler_maclaurin_zeta") {
    OracleConfig cfg;
    cfg.circle_radius = 0.2;
    cplx via_circle =
        cauchy_circle([&](cplx z) { return euler_maclaurin_zeta(z, 0); }, cplx(0.5, 30), 1, cfg);
    cplx direct = euler_maclaurin_zeta(cplx(0.5, 30), 1);
    CHECK(std::abs(via_circle - direct) < 1e-8);
}

TEST_CASE("cauchy_circle refuses circles near s = 1") {
    OracleConfig cfg;
    cfg.circle_radius = 0.25;
    CHECK_THROWS_AS(
        cauchy_circle([](cplx z) { return z; }, cplx(1.2, 0), 1, cfg), domain_error);
}
