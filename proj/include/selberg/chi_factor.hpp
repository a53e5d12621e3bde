#pragma once

#include <mutex>
#include <optional>
#include <vector>

#include "selberg/datum.hpp"
#include "selberg/partitions.hpp"
#include "selberg/special_functions.hpp"

namespace selberg {

/// chi_F(s) = omega Q^{1-2s} prod_j Gamma(lambda_j(1-s)+conj mu_j)/Gamma(lambda_j s + mu_j),
/// accumulated in log space.  Gamma poles upstairs (chi pole) or downstairs
/// (chi zero) raise domain errors naming the factor and the integer hit.
inline cplx chi_exact(const SelbergDatum& datum, cplx s) {
    cplx lw = std::log(datum.omega) + (1.0 - 2.0 * s) * std::log(datum.Q);
    for (int j = 0; j < datum.q(); ++j) {
        double lam = datum.lambdas[(std::size_t)j];
        cplx mu = datum.mus[(std::size_t)j];
        try {
            lw += log_gamma(lam * (1.0 - s) + std::conj(mu));
        } catch (const domain_error& e) {
            throw domain_error("chi_exact: pole of chi (numerator Gamma factor j=" +
                                   std::to_string(j + 1) + " at nonpositive integer " +
                                   std::to_string(e.pole()) + ")",
                               e.pole(), j + 1);
        }
        try {
            lw -= log_gamma(lam * s + mu);
        } catch (const domain_error& e) {
            throw domain_error("chi_exact: zero of chi (denominator Gamma factor j=" +
                                   std::to_string(j + 1) + " at nonpositive integer " +
                                   std::to_string(e.pole()) + ")",
                               e.pole(), j + 1);
        }
    }
    return std::exp(lw);
}

struct ChiAsymptotic {
    double modulus = 0.0;          ///< C_F^{1/2-sigma} |t|^{d_F(1/2-sigma)}
    double phase = 0.0;            ///< theta_F(t)
    cplx omega{1.0, 0.0};
    double rel_error_budget = 0.0; ///< measured c / |t|

    cplx value() const { return omega * modulus * std::exp(cplx(0.0, phase)); }
};

namespace detail {

/// theta_F(t): the full oscillating phase of chi_F along vertical lines.
/// Derived from Stirling; the lambda^{2 Im mu} constant and the |t|^{2 Im mu}
/// part both live here, keeping the modulus real.
inline double chi_phase(const SelbergDatum& datum, const DerivedConstants& dc, double t) {
    double at = std::abs(t);
    double sg = sgn(t);
    double theta = sg * (dc.d_F * at - at * std::log(dc.C_F * std::pow(at, dc.d_F)) -
                         (0.5 * dc.d_F + dc.e_F - datum.q()) * constants::pi / 2.0);
    for (int j = 0; j < datum.q(); ++j)
        theta -= 2.0 * datum.mus[(std::size_t)j].imag() *
                 std::log(datum.lambdas[(std::size_t)j] * at);
    return theta;
}

inline cplx chi_leading(const SelbergDatum& datum, const DerivedConstants& dc, cplx s) {
    double at = std::abs(s.imag());
    double modulus = std::pow(dc.C_F, 0.5 - s.real()) * std::pow(at, dc.d_F * (0.5 - s.real()));
    return datum.omega * modulus * std::exp(cplx(0.0, chi_phase(datum, dc, s.imag())));
}

} // namespace detail

/// Leading form of chi_F with a measured O(1/|t|) slack: the budget constant
/// is calibrated against chi_exact on a fixed sample for this datum.
inline ChiAsymptotic chi_asymptotic(const SelbergDatum& datum, cplx s) {
    if (std::abs(s.imag()) < 10.0)
        throw domain_error("chi_asymptotic: requires |Im s| >= 10");
    auto dc = derived_constants(datum);
    double c = 0.0;
    for (double tt : {25.0, 50.0, 100.0, 250.0, 600.0}) {
        for (double sig : {0.0, 0.5, 1.0}) {
            cplx p(sig, tt);
            cplx gap = chi_exact(datum, p) / detail::chi_leading(datum, dc, p) - 1.0;
            c = std::max(c, std::abs(gap) * tt);
        }
    }
    ChiAsymptotic out;
    out.modulus = std::pow(dc.C_F, 0.5 - s.real()) *
                  std::pow(std::abs(s.imag()), dc.d_F * (0.5 - s.real()));
    out.phase = detail::chi_phase(datum, dc, s.imag());
    out.omega = datum.omega;
    out.rel_error_budget = 1.5 * c / std::abs(s.imag());
    return out;
}

/// G^(l): the logarithmic-derivative tower of chi_F.
///   G^(1) = chi'/chi, G^(l) = d^{l-1}/ds^{l-1} G^(1).
/// Poles sit at lambda_j s + mu_j in Z_{<=0} and lambda_j(1-s)+conj mu_j in
/// Z_{<=0}; the HAFF buffer turns proximity into domain errors.
inline cplx g_tower(const SelbergDatum& datum, cplx s, int l, double pole_buffer = 0.1) {
    if (l < 1) throw argument_error("g_tower: l must be >= 1");
    auto dc = derived_constants(datum);
    if (l == 1) {
        kahan_sum acc;
        acc.add(cplx(-2.0 * std::log(datum.Q) + dc.d_F * constants::euler_gamma, 0.0));
        for (int j = 0; j < datum.q(); ++j) {
            double lam = datum.lambdas[(std::size_t)j];
            cplx a = lam * s + datum.mus[(std::size_t)j];
            cplx b = lam * (1.0 - s) + std::conj(datum.mus[(std::size_t)j]);
            for (cplx z : {a, b}) {
                double rn = std::round(z.real());
                if (rn <= 0.0 && std::hypot(z.real() - rn, z.imag()) < pole_buffer)
                    throw domain_error("g_tower: pole of the Gamma chain (factor j=" +
                                           std::to_string(j + 1) + ", integer " +
                                           std::to_string((long)rn) + ")",
                                       (long)rn, j + 1);
            }
            acc.add(lam * (1.0 / a + 1.0 / b));
            acc.add(lam * (haff_sum_1(a, pole_buffer) + haff_sum_1(b, pole_buffer)));
        }
        return acc.value();
    }
    // l >= 2: polygamma-type sums including the n = 0 term
    double fact = 1.0;
    for (int i = 2; i <= l - 1; ++i) fact *= i;
    double sign = ((l - 1) % 2) ? -1.0 : 1.0; // (-1)^{l-1}
    kahan_sum acc;
    for (int j = 0; j < datum.q(); ++j) {
        double lam = datum.lambdas[(std::size_t)j];
        cplx a = lam * s + datum.mus[(std::size_t)j];
        cplx b = lam * (1.0 - s) + std::conj(datum.mus[(std::size_t)j]);
        for (cplx z : {a, b}) {
            double rn = std::round(z.real());
            if (rn <= 0.0 && std::hypot(z.real() - rn, z.imag()) < pole_buffer)
                throw domain_error("g_tower: pole of the Gamma chain (factor j=" +
                                       std::to_string(j + 1) + ", integer " +
                                       std::to_string((long)rn) + ")",
                                   (long)rn, j + 1);
        }
        double lam_l = pow_int(lam, l);
        cplx sum_a = pow_int(1.0 / a, l) + haff_sum_l(a, l, pole_buffer);
        cplx sum_b = pow_int(1.0 / b, l) + haff_sum_l(b, l, pole_buffer);
        acc.add(lam_l * fact * (sign * sum_a + sum_b));
    }
    return acc.value();
}

/// One term of the exponential Bell expansion: multiplicities (l_1..l_r) with
/// sum i*l_i = r and the integer coefficient r!/prod(l_i! (i!)^{l_i}).
struct BellTerm {
    std::vector<int> multiplicities;
    std::uint64_t coefficient;
};

struct BellExpansion {
    int order = 0;
    std::vector<BellTerm> terms;
};

/// Complete exponential Bell coefficients over the partitions of r, cached
/// behind a once-only initialization.  Capacity capped at r <= 12.
inline const BellExpansion& bell_expansion(int r) {
    if (r < 0) throw argument_error("bell_expansion: r must be nonnegative");
    if (r > 12) throw capacity_error("bell_expansion: capped at r <= 12 (factorial growth)");
    static std::vector<std::optional<BellExpansion>> cache(13);
    static std::mutex mutex;
    std::lock_guard<std::mutex> lock(mutex);
    auto& slot = cache[(std::size_t)r];
    if (!slot) {
        BellExpansion exp;
        exp.order = r;
        for_each_partition(r, [&](const std::vector<int>& mult) {
            exp.terms.push_back({mult, partition_multinomial(mult)});
        });
        slot = std::move(exp);
    }
    return *slot;
}

/// (chi^(r)/chi)(s) by the Bell composition over the G tower.
inline cplx chi_log_ratio(const SelbergDatum& datum, cplx s, int r, double pole_buffer = 0.1) {
    if (r < 0) throw argument_error("chi_log_ratio: r must be nonnegative");
    if (r == 0) return cplx(1.0, 0.0);
    const auto& bell = bell_expansion(r);
    std::vector<cplx> towers((std::size_t)r + 1, cplx(0, 0));
    for (int l = 1; l <= r; ++l) towers[(std::size_t)l] = g_tower(datum, s, l, pole_buffer);
    kahan_sum acc;
    for (const auto& term : bell.terms) {
        cplx prod(double(term.coefficient), 0.0);
        for (int i = 1; i <= r; ++i) {
            int li = term.multiplicities[(std::size_t)i];
            if (li) prod *= pow_int(towers[(std::size_t)i], li);
        }
        acc.add(prod);
    }
    return acc.value();
}

/// chi_F^(r)(s) = chi_F(s) * (chi^(r)/chi)(s).
inline cplx chi_derivative(const SelbergDatum& datum, cplx s, int r, double pole_buffer = 0.1) {
    cplx base = chi_exact(datum, s);
    if (r == 0) return base;
    return base * chi_log_ratio(datum, s, r, pole_buffer);
}

} // namespace selberg
