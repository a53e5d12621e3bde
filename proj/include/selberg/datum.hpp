#pragma once

#include <cmath>
#include <memory>
#include <string>
#include <vector>

#include "selberg/coefficients.hpp"
#include "selberg/numerics.hpp"

namespace selberg {

/// Functional-equation data of a Selberg-class element:
///   Phi(s) = Q^s prod_j Gamma(lambda_j s + mu_j) F(s),  Phi(s) = omega conj(Phi(conj(1-s))).
struct SelbergDatum {
    std::string label;
    double Q = 0.0;
    std::vector<double> lambdas;
    std::vector<cplx> mus;
    cplx omega{1.0, 0.0};
    int pole_order = 0;
    std::shared_ptr<CoefficientSource> coeffs;

    int q() const { return (int)lambdas.size(); }

    void validate() const {
        if (lambdas.empty()) throw validation_error("q", "datum needs at least one Gamma factor");
        if (lambdas.size() != mus.size())
            throw validation_error("mu", "mu list length must match lambda list");
        if (!(Q > 0.0)) throw validation_error("Q", "Q must be positive");
        for (std::size_t j = 0; j < lambdas.size(); ++j) {
            if (!(lambdas[j] > 0.0))
                throw validation_error("lambda", "lambda[" + std::to_string(j + 1) + "] must be positive");
            if (mus[j].real() < 0.0)
                throw validation_error("mu", "Re mu[" + std::to_string(j + 1) + "] must be >= 0");
        }
        if (std::abs(std::abs(omega) - 1.0) > 1e-14)
            throw validation_error("omega", "omega must have unit modulus");
        if (pole_order < 0) throw validation_error("pole_order", "pole_order must be >= 0");
        if (!coeffs) throw validation_error("coeffs", "datum needs a coefficient source");
    }

    /// The bar-datum: mus conjugated, omega conjugated, coefficients conjugated.
    SelbergDatum conjugate() const {
        SelbergDatum d = *this;
        d.label = label + "_bar";
        for (auto& m : d.mus) m = std::conj(m);
        d.omega = std::conj(omega);
        if (coeffs && !coeffs->real_coefficients()) d.coeffs = coeffs->conjugated();
        return d;
    }
};

/// Constants derived from the functional-equation data.
struct DerivedConstants {
    double d_F = 0.0;       ///< degree, 2 sum lambda_j
    double e_F = 0.0;       ///< 2 sum Re mu_j
    double C_F = 0.0;       ///< (Q prod lambda_j^lambda_j)^2
    double C_F_prime = 0.0; ///< modulus convention: same real constant, the
                            ///< lambda_j^{2 Im mu_j} part lives in the phase
    int f_F = 0;            ///< 2 sum max{0, floor(lambda_j/2 - Re mu_j)}
    std::vector<int> nu;    ///< per-factor nu_j of the A_j regularizer

    double M_F(int m, int pole_order, int q) const {
        return 0.75 * d_F + 0.5 * (e_F - q) + 2.0 * (pole_order + m) + (m + 1.0) * f_F;
    }
};

inline DerivedConstants derived_constants(const SelbergDatum& datum) {
    datum.validate();
    DerivedConstants dc;
    double lam_prod_pow = 1.0;
    for (std::size_t j = 0; j < datum.lambdas.size(); ++j) {
        double lam = datum.lambdas[j];
        dc.d_F += 2.0 * lam;
        dc.e_F += 2.0 * datum.mus[j].real();
        lam_prod_pow *= std::pow(lam, lam);
        double gap = 0.5 * lam - datum.mus[j].real();
        int nu_j = (datum.mus[j].real() > 0.5 * lam) ? 0 : (int)std::floor(gap);
        dc.nu.push_back(nu_j);
        dc.f_F += 2 * std::max(0, (int)std::floor(gap));
    }
    dc.C_F = std::pow(datum.Q * lam_prod_pow, 2.0);
    dc.C_F_prime = dc.C_F;
    return dc;
}

// ---- built-in catalog ----

inline SelbergDatum zeta_datum() {
    SelbergDatum d;
    d.label = "zeta";
    d.Q = 1.0 / std::sqrt(constants::pi);
    d.lambdas = {0.5};
    d.mus = {cplx(0, 0)};
    d.omega = cplx(1, 0);
    d.pole_order = 1;
    d.coeffs = CoefficientSource::make_zeta();
    return d;
}

/// L attached to the weight-12 cusp form Delta, normalized so the functional
/// equation reflects at s = 1/2: lambda(n) = tau(n)/n^{11/2}.
inline SelbergDatum delta_datum() {
    SelbergDatum d;
    d.label = "delta";
    d.Q = 1.0 / (2.0 * constants::pi);
    d.lambdas = {1.0};
    d.mus = {cplx(5.5, 0)};
    d.omega = cplx(1, 0); // (-1)^{k/2} with k = 12
    d.pole_order = 0;
    d.coeffs = CoefficientSource::make_delta();
    return d;
}

/// Rankin-Selberg convolution of Delta with itself, with the plain
/// coefficient product a(n) = lambda(n) conj(lambda(n)) (no zeta(2s) factor).
inline SelbergDatum rankin_selberg_delta_datum() {
    SelbergDatum d;
    d.label = "rankin_selberg_delta";
    double twopi = 2.0 * constants::pi;
    d.Q = 1.0 / (twopi * twopi);
    d.lambdas = {1.0, 1.0};
    d.mus = {cplx(0, 0), cplx(11.0, 0)};
    d.omega = cplx(1, 0);
    d.pole_order = 1;
    d.coeffs = CoefficientSource::make_rankin_selberg();
    return d;
}

inline SelbergDatum builtin_datum(const std::string& name) {
    if (name == "zeta") return zeta_datum();
    if (name == "delta") return delta_datum();
    if (name == "rankin_selberg_delta" || name == "rankin_selberg") return rankin_selberg_delta_datum();
    throw validation_error("datum", "unknown built-in datum '" + name + "'");
}

} // namespace selberg
