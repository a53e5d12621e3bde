#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "selberg/datum.hpp"
#include "selberg/oracle.hpp"
#include "selberg/special_functions.hpp"

using namespace selberg;

TEST_CASE("derived constants for the zeta datum") {
    auto d = zeta_datum();
    auto dc = derived_constants(d);
    CHECK(dc.d_F == Catch::Approx(1.0));
    CHECK(dc.C_F == Catch::Approx(1.0 / (2.0 * constants::pi)).epsilon(1e-14));
    CHECK(dc.e_F == 0.0);
    CHECK(dc.f_F == 0);
    REQUIRE(dc.nu.size() == 1);
    CHECK(dc.nu[0] == 0); // floor(1/4) = 0, so A has the single factor s/2
}

TEST_CASE("derived constants for the Rankin-Selberg datum") {
    auto d = rankin_selberg_delta_datum();
    auto dc = derived_constants(d);
    CHECK(dc.d_F == Catch::Approx(4.0));
    // sharp-equation error exponent d_F/2 (1-sigma) - 1/2 = 3/2 - 2 sigma
    auto expo = [&](double sigma) { return dc.d_F / 2.0 * (1.0 - sigma) - 0.5; };
    CHECK(expo(0.0) == Catch::Approx(1.5));
    CHECK(expo(1.0) == Catch::Approx(-0.5));
    CHECK(dc.e_F == Catch::Approx(22.0));
    CHECK(dc.C_F == Catch::Approx(std::pow(1.0 / std::pow(2.0 * constants::pi, 2), 2)));
}

TEST_CASE("degree is 2 sum lambda") {
    SelbergDatum d;
    d.label = "toy";
    d.Q = 1.0;
    d.lambdas = {0.5};
    d.mus = {cplx(0.3, 0)};
    d.pole_order = 0;
    d.coeffs = CoefficientSource::make_zeta();
    CHECK(derived_constants(d).d_F == Catch::Approx(1.0));
}

TEST_CASE("datum validation names the offending field") {
    auto d = zeta_datum();
    d.Q = -1.0;
    try {
        derived_constants(d);
        FAIL("expected validation error");
    } catch (const validation_error& e) {
        CHECK(e.field() == "Q");
    }
    auto d2 = zeta_datum();
    d2.omega = cplx(0.5, 0);
    CHECK_THROWS_AS(d2.validate(), validation_error);
    auto d3 = zeta_datum();
    d3.lambdas = {-0.5};
    d3.mus = {cplx(0, 0)};
    CHECK_THROWS_AS(d3.validate(), validation_error);
}

TEST_CASE("M_F grows strictly in m") {
    for (const auto& d : {zeta_datum(), delta_datum(), rankin_selberg_delta_datum()}) {
        auto dc = derived_constants(d);
        for (int m = 0; m < 6; ++m)
            CHECK(dc.M_F(m + 1, d.pole_order, d.q()) > dc.M_F(m, d.pole_order, d.q()));
    }
}

TEST_CASE("f_F is even") {
    for (const auto& d : {zeta_datum(), delta_datum(), rankin_selberg_delta_datum()}) {
        auto dc = derived_constants(d);
        CHECK(dc.f_F % 2 == 0);
    }
}

// Completed-function reflection: Phi(s) = omega conj(Phi(1 - conj(s))), with
// the reflected F value supplied through the functional equation so both
// sides rest on the sigma = 3 direct series.
TEST_CASE("completed function reflection at sigma = 3") {
    std::mt19937_64 rng(777);
    std::uniform_real_distribution<double> imt(1.0, 5.0);
    for (const auto& datum : {zeta_datum(), delta_datum(), rankin_selberg_delta_datum()}) {
        for (int i = 0; i < 10; ++i) {
            cplx s(3.0, imt(rng));
            OracleConfig cfg;
            cfg.max_terms = 10000;
            cfg.target_abs_tol = 1e-4; // the identity below is exact in the F value
            cplx F_s = direct_series(datum, s, 0, cfg);

            auto phi_at = [&](cplx z, cplx F_val, bool conj_mu) {
                cplx acc = std::pow(datum.Q, z) * F_val;
                for (std::size_t j = 0; j < datum.lambdas.size(); ++j) {
                    cplx mu = conj_mu ? std::conj(datum.mus[j]) : datum.mus[j];
                    acc *= std::exp(log_gamma(datum.lambdas[j] * z + mu));
                }
                return acc;
            };

            cplx lhs = phi_at(s, F_s, false);
            // F(1 - conj s) through the functional equation and the series at s
            cplx chi_refl = 1.0;
            {
                cplx z = 1.0 - std::conj(s);
                cplx lw = std::log(datum.omega) + (1.0 - 2.0 * z) * std::log(datum.Q);
                for (std::size_t j = 0; j < datum.lambdas.size(); ++j)
                    lw += log_gamma(datum.lambdas[j] * (1.0 - z) + std::conj(datum.mus[j])) -
                          log_gamma(datum.lambdas[j] * z + datum.mus[j]);
                chi_refl = std::exp(lw);
            }
            cplx F_refl = chi_refl * std::conj(F_s);
            cplx rhs = datum.omega * std::conj(phi_at(1.0 - std::conj(s), F_refl, false));
            CHECK(std::abs(lhs - rhs) / std::abs(lhs) < 1e-6);
        }
    }
}
