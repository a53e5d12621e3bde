#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "selberg/afe.hpp"
#include "selberg/oracle.hpp"
#include "selberg/report.hpp"

using namespace selberg;

TEST_CASE("g_regularizer closed-form values") {
    auto z = zeta_datum();
    // (s(1-s))^{p+m} * (A(s) A-bar(1-s))^{m+1} with A(s) = s/2 at s = 2:
    // (2 * -1) * (1 * -1/2) = 1
    CHECK(std::abs(g_regularizer(z, cplx(2, 0), 0) - cplx(1, 0)) < 1e-14);

    // all Re mu > lambda/2: every A_j is 1
    SelbergDatum d;
    d.label = "toy";
    d.Q = 1.0;
    d.lambdas = {1.0};
    d.mus = {cplx(3.0, 0.5)};
    d.pole_order = 2;
    d.coeffs = CoefficientSource::make_zeta();
    cplx s(0.3, 4.0);
    CHECK(std::abs(g_regularizer(d, s, 0) - pow_int(s * (1.0 - s), 2)) < 1e-12);
}

TEST_CASE("g_regularizer conjugate symmetry") {
    std::mt19937_64 rng(808);
    std::uniform_real_distribution<double> re(-2.0, 3.0), im(-50.0, 50.0);
    for (const auto& d : {zeta_datum(), delta_datum(), rankin_selberg_delta_datum()}) {
        for (int i = 0; i < 10; ++i) {
            cplx s(re(rng), im(rng));
            for (int m : {0, 1}) {
                cplx a = g_regularizer(d, s, m);
                cplx b = std::conj(g_regularizer(d, 1.0 - std::conj(s), m));
                CHECK(std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(a)));
            }
        }
    }
}

TEST_CASE("contour spec geometry") {
    auto c = ContourSpec::for_point(cplx(0.3, 50.0));
    CHECK(c.radius == std::sqrt(50.0));
    CHECK(c.left_center() == Catch::Approx(-0.8));
    CHECK(c.right_center() == Catch::Approx(1.2));
    // closed path: integral of dw vanishes, integral of 1/w is 2 pi i
    kahan_sum dw, inv;
    c.for_each_node([&](cplx w, cplx weight) {
        dw.add(weight);
        inv.add(weight / w);
    });
    CHECK(std::abs(dw.value()) < 1e-12);
    CHECK(std::abs(inv.value() - cplx(0, 2.0 * constants::pi)) < 1e-10);
}

TEST_CASE("gamma_0 equals the chi ratio residue (reduction lemma)") {
    std::mt19937_64 rng(99182);
    std::uniform_real_distribution<double> sig(0.0, 1.0), tt(20.0, 300.0);
    std::vector<SelbergDatum> data{zeta_datum(), delta_datum(), rankin_selberg_delta_datum()};
    for (int i = 0; i < 12; ++i) {
        const auto& d = data[(std::size_t)(i % 3)];
        cplx s(sig(rng), tt(rng));
        int r = i % 3;
        cplx quad = gamma_delta_coeff(d, s, 0, r, coeff_variant::gamma);
        cplx residue = chi_log_ratio(d, 1.0 - s, r);
        CHECK(std::abs(quad - residue) <= 1e-6 * std::abs(residue));
    }
}

TEST_CASE("delta_0 at 1-s recovers the chi ratio at s") {
    auto z = zeta_datum();
    cplx s(0.3, 60.0);
    cplx quad = gamma_delta_coeff(z, 1.0 - s, 0, 1, coeff_variant::delta);
    cplx residue = chi_log_ratio(z, s, 1);
    CHECK(std::abs(quad - residue) <= 1e-6 * std::abs(residue));
}

TEST_CASE("gamma_1 and gamma_2 magnitudes carry modest constants") {
    auto z = zeta_datum();
    for (double t : {50.0, 100.0, 200.0}) {
        auto tab = gamma_delta_table(z, cplx(0.5, t), 0, 2, 0, coeff_variant::gamma);
        CHECK(std::abs(tab.at(1, 0)) * t <= 10.0);
        CHECK(std::abs(tab.at(2, 0)) * t <= 10.0);
        CHECK(tab.err(1, 0) <= 1e-8);
        CHECK(tab.err(2, 0) <= 1e-8);
    }
}

TEST_CASE("contour coefficient guards") {
    auto z = zeta_datum();
    CHECK_THROWS_AS(gamma_delta_table(z, cplx(0.5, 5.0), 0, 2, 0, coeff_variant::gamma),
                    domain_error);
    // at |t| = 10 a twelve-pole prefactor cannot be cleared by any stadium
    CHECK_THROWS_AS(gamma_delta_table(z, cplx(0.5, 10.0), 0, 12, 0, coeff_variant::gamma),
                    contour_error);
    CHECK_THROWS_AS(gamma_delta_table(z, cplx(0.5, 50.0), 0, 13, 0, coeff_variant::gamma),
                    capacity_error);
}

TEST_CASE("afe_sharp cutoffs and basic structure") {
    auto z = zeta_datum();
    auto res = afe_sharp(z, cplx(0.5, 100), 0);
    CHECK(res.y1 == Catch::Approx(std::sqrt(100.0 / (2.0 * constants::pi))));
    CHECK(res.y1 == res.y2);
    CHECK(res.y1 * res.y2 ==
          Catch::Approx(derived_constants(z).C_F * 100.0).epsilon(1e-12));
    // 3 terms per side at t = 100
    CHECK((long)std::floor(res.y1) == 3);

    // Rankin-Selberg cutoff |t|^2/(4 pi^2) at t = 40
    auto rs = afe_sharp(rankin_selberg_delta_datum(), cplx(0.6, 40), 1);
    CHECK(rs.y1 == Catch::Approx(1600.0 / (4.0 * constants::pi * constants::pi)));
}

TEST_CASE("afe_sharp against the strip oracle") {
    auto z = zeta_datum();
    for (int m = 0; m <= 2; ++m) {
        for (double t : {40.0, 150.0}) {
            auto res = afe_sharp(z, cplx(0.5, t), m);
            cplx oracle = euler_maclaurin_zeta(cplx(0.5, t), m);
            CHECK(std::abs(res.value - oracle) <= res.error_estimate);
        }
    }
}

TEST_CASE("afe_sharp hypothesis and domain errors") {
    auto z = zeta_datum();
    CHECK_THROWS_AS(afe_sharp(z, cplx(2.0, 50), 0), hypothesis_error);
    CHECK_THROWS_AS(afe_sharp(z, cplx(-0.2, 50), 0), hypothesis_error);
    CHECK_THROWS_AS(afe_sharp(z, cplx(0.5, 4.0), 0), domain_error);
    CHECK_THROWS_AS(afe_sharp(z, cplx(0.5, 50), 7), capacity_error);
}

TEST_CASE("afe_sharp conjugation symmetry") {
    for (const auto& d : {zeta_datum(), delta_datum()}) {
        for (int m : {0, 1}) {
            auto up = afe_sharp(d, cplx(0.4, 80), m);
            auto down = afe_sharp(d, cplx(0.4, -80), m);
            CHECK(std::abs(down.value - std::conj(up.value)) <=
                  1e-10 * std::max(1.0, std::abs(up.value)));
        }
    }
}

TEST_CASE("afe_smoothed reproduces the oracle within its budget") {
    auto z = zeta_datum();
    auto phi = base_bump();
    auto res = afe_smoothed(z, cplx(0.5, 60), 0, phi);
    cplx oracle = euler_maclaurin_zeta(cplx(0.5, 60), 0);
    CHECK(std::abs(res.value - oracle) <= res.error_estimate);
    CHECK(std::abs(res.value - oracle) < 0.05); // and is genuinely accurate here
}

TEST_CASE("sharp and smoothed agree within combined budgets") {
    auto z = zeta_datum();
    auto phi = base_bump();
    for (int m = 0; m <= 2; ++m) {
        for (double sigma : {0.0, 0.5, 1.0}) {
            for (double t : {60.0, 150.0}) {
                auto a = afe_sharp(z, cplx(sigma, t), m);
                auto b = afe_smoothed(z, cplx(sigma, t), m, phi);
                INFO("m=" << m << " sigma=" << sigma << " t=" << t);
                CHECK(std::abs(a.value - b.value) <= a.error_estimate + b.error_estimate);
            }
        }
    }
}

TEST_CASE("y-split invariance within budgets") {
    auto z = zeta_datum();
    cplx s(0.5, 80);
    auto one = afe_sharp(z, s, 1, 1.0);
    auto two = afe_sharp(z, s, 1, 2.0);
    CHECK(std::abs(one.value - two.value) <= one.error_estimate + two.error_estimate);
    CHECK(one.y1 * one.y2 == Catch::Approx(two.y1 * two.y2));

    auto phi = base_bump();
    auto sm_one = afe_smoothed(z, s, 1, phi, -1, 1.0);
    auto sm_two = afe_smoothed(z, s, 1, phi, -1, 2.0);
    CHECK(std::abs(sm_one.value - sm_two.value) <=
          sm_one.error_estimate + sm_two.error_estimate);
}

TEST_CASE("afe_smoothed guards") {
    auto z = zeta_datum();
    auto phi = base_bump();
    try {
        afe_smoothed(z, cplx(0.5, 60), 1, phi, 3); // M_F(1) = 4.25 needs l >= 5
        FAIL("expected hypothesis error");
    } catch (const hypothesis_error& e) {
        CHECK(e.threshold() == Catch::Approx(4.25));
    }
    CHECK_THROWS_AS(afe_smoothed(z, cplx(0.5, 60), 0, sharp_cutoff()), smoothness_error);
    // Rankin-Selberg needs l >= 14, beyond the l <= 12 capacity
    CHECK_THROWS_AS(afe_smoothed(rankin_selberg_delta_datum(), cplx(0.5, 60), 0, phi),
                    capacity_error);
}

TEST_CASE("afe_smoothed runs for the delta datum (wide budget)") {
    auto res = afe_smoothed(delta_datum(), cplx(0.5, 80), 0, base_bump());
    CHECK(std::isfinite(res.value.real()));
    CHECK(res.error_estimate > 0.0);
    // identity cross-check through the sharp mode
    auto sharp = afe_sharp(delta_datum(), cplx(0.5, 80), 0);
    CHECK(std::abs(res.value - sharp.value) <= res.error_estimate + sharp.error_estimate);
}

TEST_CASE("reflect_fdfe single-term and derivative forms") {
    auto z = zeta_datum();
    // m = 0 at sigma = 2: chi(s) conj(zeta(1 - conj s)) vs the direct series
    cplx s(2.0, 30.0);
    cplx reflected = reflect_fdfe(z, s, 0, {std::conj(euler_maclaurin_zeta(1.0 - std::conj(s), 0))});
    cplx direct = direct_series(z, s, 0);
    CHECK(std::abs(reflected - direct) <= 1e-8 * std::abs(direct));

    // m = 1 with both sides from the oracle
    cplx s2(0.5, 40.0);
    std::vector<cplx> vals{std::conj(euler_maclaurin_zeta(1.0 - std::conj(s2), 0)),
                           std::conj(euler_maclaurin_zeta(1.0 - std::conj(s2), 1))};
    cplx lhs = euler_maclaurin_zeta(s2, 1);
    CHECK(std::abs(reflect_fdfe(z, s2, 1, vals) - lhs) <= 1e-6);

    CHECK_THROWS_AS(reflect_fdfe(z, s2, 1, {cplx(1, 0)}), argument_error);
}

TEST_CASE("error scaling regression for zeta sharp residuals") {
    // residual / |t|^{(1-sigma)/2 - 1/2 + 0.05} stays bounded in t
    auto z = zeta_datum();
    for (int m = 0; m <= 2; ++m) {
        for (double sigma : {0.0, 0.25, 0.5, 0.75, 1.0}) {
            for (double t : {50.0, 100.0, 200.0, 400.0}) {
                auto r = afe_sharp(z, cplx(sigma, t), m);
                double resid = std::abs(r.value - euler_maclaurin_zeta(cplx(sigma, t), m));
                double norm = resid / std::pow(t, (1.0 - sigma) / 2.0 - 0.5 + 0.05);
                INFO("m=" << m << " sigma=" << sigma << " t=" << t);
                CHECK(norm <= 10.5); // measured max 7.03, frozen with headroom
            }
        }
    }
}

TEST_CASE("fdfe self-consistency of the engine across built-ins") {
    Calibration cal = Calibration::defaults();
    for (const auto& d : {zeta_datum(), delta_datum(), rankin_selberg_delta_datum()}) {
        for (int m : {0, 1}) {
            for (double t : {40.0, 120.0}) {
                auto row = fdfe_row(d, cplx(0.5, t), m, cal);
                INFO(d.label << " m=" << m << " t=" << t << " residual=" << row.residual
                             << " budget=" << row.budget);
                CHECK(row.pass);
            }
        }
    }
}

TEST_CASE("residual suite emits the report schema and catches corruption") {
    GridSpec grid;
    grid.sigmas = {0.5};
    grid.ts = {40.0};
    grid.m_max = 1;
    grid.with_smoothed = false;
    grid.slope_ts = {30.0, 60.0, 120.0, 240.0};
    auto rows = residual_suite(zeta_datum(), grid);
    CHECK(rows.size() >= 8);
    bool all = true;
    for (const auto& r : rows) all = all && r.pass;
    CHECK(all);
    auto csv = report_to_csv(rows);
    CHECK(csv.rfind("label,sigma,t,m,mode,value_re,value_im,residual,budget,pass\n", 0) == 0);

    grid.corrupt_chi = true;
    grid.sigmas = {0.0, 0.25};
    grid.ts = {150.0};
    grid.m_max = 2;
    auto bad = residual_suite(zeta_datum(), grid);
    bool any_fail = false;
    for (const auto& r : bad) any_fail = any_fail || !r.pass;
    CHECK(any_fail);
}
