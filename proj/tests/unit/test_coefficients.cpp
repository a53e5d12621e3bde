#include <catch2/catch_amalgamated.hpp>

#include <numeric>

#include "selberg/coefficients.hpp"
#include "support/reference.hpp"

using namespace selberg;

TEST_CASE("zeta coefficients are all one") {
    auto src = CoefficientSource::make_zeta();
    auto a = src->take(5);
    for (const auto& v : a) CHECK(v == cplx(1.0, 0.0));
}

TEST_CASE("tau generator against the naive eta-product oracle") {
    auto naive = testref::naive_tau(200);
    auto src = CoefficientSource::make_delta();
    auto a = src->take(200);
    for (int n = 1; n <= 200; ++n) {
        double lam = double(naive[(std::size_t)n]) / std::pow(double(n), 5.5);
        CHECK(std::abs(a[(std::size_t)n - 1] - cplx(lam, 0)) < 1e-15 * std::max(1.0, std::abs(lam)));
    }
    // frozen classical values
    for (int n = 1; n <= 10; ++n) CHECK(naive[(std::size_t)n] == testref::tau_table[n]);
}

TEST_CASE("lambda_Delta(2) from the q-expansion") {
    auto src = CoefficientSource::make_delta();
    auto a = src->take(2);
    CHECK(a[1].real() == Catch::Approx(-24.0 / std::pow(2.0, 5.5)).epsilon(1e-14));
}

TEST_CASE("rankin_selberg coefficients are |lambda|^2") {
    auto src = CoefficientSource::make_rankin_selberg();
    auto a = src->take(4);
    CHECK(a[0].real() == Catch::Approx(1.0));
    CHECK(a[1].real() == Catch::Approx(576.0 / 2048.0).epsilon(1e-14)); // 576/2^11
    for (const auto& v : a) CHECK(v.imag() == 0.0);
}

TEST_CASE("Hecke multiplicativity of lambda_Delta on coprime pairs") {
    auto src = CoefficientSource::make_delta();
    auto a = src->take(6000);
    auto lam = [&](int n) { return a[(std::size_t)n - 1].real(); };
    int checked = 0;
    for (int m = 2; m < 70; ++m) {
        for (int n = m + 1; n < 80; ++n) {
            if (std::gcd(m, n) != 1 || m * n > 6000) continue;
            CHECK(std::abs(lam(m * n) - lam(m) * lam(n)) < 1e-12);
            ++checked;
        }
    }
    CHECK(checked > 100);
}

TEST_CASE("cache extension keeps prefixes consistent") {
    auto src = CoefficientSource::make_delta();
    auto first = src->take(50);
    auto second = src->take(5000);
    for (int i = 0; i < 50; ++i) CHECK(first[(std::size_t)i] == second[(std::size_t)i]);
}

TEST_CASE("user table length errors carry the required length") {
    auto src = CoefficientSource::make_table({cplx(1, 0), cplx(0.5, 0.1)});
    CHECK(src->take(2).size() == 2);
    try {
        src->take(10);
        FAIL("expected capacity error");
    } catch (const capacity_error& e) {
        CHECK(e.achieved() == 2.0);
    }
}

TEST_CASE("coefficient growth stays tame (axiom (d) smoke test)") {
    // max_{n<=N} |a(n)|/n^0.3 should stabilize as N runs through 1e2..1e4
    for (auto src : {CoefficientSource::make_zeta(), CoefficientSource::make_delta(),
                     CoefficientSource::make_rankin_selberg()}) {
        auto a = src->take(10000);
        double c100 = 0, c1000 = 0, c10000 = 0;
        for (int n = 1; n <= 10000; ++n) {
            double r = std::abs(a[(std::size_t)n - 1]) / std::pow(double(n), 0.3);
            if (n <= 100) c100 = std::max(c100, r);
            if (n <= 1000) c1000 = std::max(c1000, r);
            c10000 = std::max(c10000, r);
        }
        INFO("kind " << to_string(src->kind()) << ": " << c100 << " " << c1000 << " " << c10000);
        CHECK(c10000 <= 4.0 * std::max(1.0, c100));
    }
}
