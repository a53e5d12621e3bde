#pragma once

#include <functional>
#include <vector>

#include "selberg/datum.hpp"
#include "selberg/numerics.hpp"

namespace selberg {

struct OracleConfig {
    double target_abs_tol = 1e-12;
    long max_terms = 4000000;
    double circle_radius = 0.25;

    void validate() const {
        if (target_abs_tol < 1e-13)
            throw argument_error("oracle: target_abs_tol below the 1e-13 floor");
        if (max_terms < 10) throw argument_error("oracle: max_terms too small");
        if (!(circle_radius > 0)) throw argument_error("oracle: circle_radius must be positive");
    }
};

namespace detail {

// integral_x^inf (log u)^m u^{-beta} du for beta > 1, via the substitution
// v = log u:  (m!/a^{m+1}) e^{-aL} sum_{k<=m} (aL)^k / k!  with a = beta-1.
inline double log_power_tail(double x, double beta, int m) {
    double a = beta - 1.0;
    double L = std::log(x);
    double fact = 1.0;
    for (int i = 2; i <= m; ++i) fact *= i;
    double sum = 0.0, term = 1.0;
    for (int k = 0; k <= m; ++k) {
        sum += term;
        term *= a * L / double(k + 1);
    }
    return fact / std::pow(a, m + 1) * std::exp(-a * L) * sum;
}

} // namespace detail

namespace detail {

// integral_a^inf (log u)^m u^{-s} du in closed form (incomplete gamma with
// integer shape, written out)
inline cplx log_power_integral(double a, cplx s, int m) {
    cplx w = s - 1.0;
    double L = std::log(a);
    double fact = 1.0;
    for (int i = 2; i <= m; ++i) fact *= i;
    cplx sum = 0.0, term = 1.0;
    for (int k = 0; k <= m; ++k) {
        sum += term;
        term *= w * L / double(k + 1);
    }
    return fact / pow_int(w, m + 1) * std::exp(-w * L) * sum;
}

// derivatives of f(u) = u^{-s} (log u)^m as u^{-s-k} P_k(log u)
inline std::vector<std::vector<cplx>> log_power_derivative_polys(cplx s, int m, int kmax) {
    std::vector<std::vector<cplx>> polys;
    std::vector<cplx> P(static_cast<std::size_t>(m) + 1, cplx(0, 0));
    P[static_cast<std::size_t>(m)] = 1.0;
    polys.push_back(P);
    for (int k = 0; k < kmax; ++k) {
        std::vector<cplx> next(P.size(), cplx(0, 0));
        for (std::size_t c = 0; c < P.size(); ++c) {
            next[c] -= (s + double(k)) * P[c];
            if (c + 1 < P.size()) next[c] += double(c + 1) * P[c + 1];
        }
        P = next;
        polys.push_back(P);
    }
    return polys;
}

inline cplx eval_poly(const std::vector<cplx>& P, double x) {
    cplx v = 0.0;
    for (std::size_t c = P.size(); c-- > 0;) v = v * x + P[c];
    return v;
}

} // namespace detail

/// Truncated Dirichlet series for F^(m)(s) in the absolute-convergence zone.
/// For the constant-coefficient (zeta) source the tail is corrected in closed
/// form by Euler-Maclaurin with the next term as the error bound; for the
/// other sources the neglected tail is bounded by the integral comparison
/// |a(n)| <= A n^eps and must fall below target_abs_tol.
inline cplx direct_series(const SelbergDatum& datum, cplx s, int m, const OracleConfig& cfg = {}) {
    cfg.validate();
    if (m < 0 || m > 12) throw argument_error("direct_series: m out of range");
    double g = datum.coeffs->growth_epsilon();
    double sigma_min = 1.0 + std::max(0.1, g + 0.05);
    if (s.real() < sigma_min)
        throw domain_error("direct_series: requires Re s >= " + std::to_string(sigma_min) +
                           " for this coefficient growth");
    double beta = s.real() - g;

    if (datum.coeffs->kind() == coefficient_kind::zeta) {
        long N = std::max<long>(2000, (long)std::ceil(2.0 * std::abs(s.imag())));
        N = std::min(N, cfg.max_terms);
        double a = double(N + 1);
        auto polys = detail::log_power_derivative_polys(s, m, 7);
        double La = std::log(a);
        auto f_deriv = [&](int k) {
            return std::exp(-(s + double(k)) * La) * detail::eval_poly(polys[(std::size_t)k], La);
        };
        double bound = std::abs(f_deriv(7)) / 1209600.0;
        if (bound > cfg.target_abs_tol)
            throw capacity_error("direct_series: tail bound " + std::to_string(bound) +
                                     " above tolerance after max_terms",
                                 bound);
        kahan_sum head;
        for (long n = 1; n <= N; ++n) {
            double logn = std::log((double)n);
            head.add(pow_int(-logn, m) * std::exp(-s * logn));
        }
        cplx tail = detail::log_power_integral(a, s, m) + 0.5 * f_deriv(0) -
                    f_deriv(1) / 12.0 + f_deriv(3) / 720.0 - f_deriv(5) / 30240.0;
        double msign = (m % 2) ? -1.0 : 1.0;
        return head.value() + msign * tail;
    }

    kahan_sum sum;
    double growth_const = 1.0;
    long n = 0;
    int chunk = 64;
    while (n < cfg.max_terms) {
        long n_hi = std::min(cfg.max_terms, n + chunk);
        auto coeff = datum.coeffs->prefix((int)n_hi);
        while (n < n_hi) {
            ++n;
            cplx a = (*coeff)[(std::size_t)n];
            if (a != cplx(0.0, 0.0)) {
                double logn = std::log((double)n);
                sum.add(a * pow_int(-logn, m) * std::exp(-s * logn));
                growth_const = std::max(growth_const, std::abs(a) / std::pow((double)n, g));
            }
        }
        double bound = growth_const * detail::log_power_tail((double)n, beta, m);
        if (bound <= cfg.target_abs_tol) return sum.value();
        chunk = std::min(16384, chunk * 2);
    }
    double bound = growth_const * detail::log_power_tail((double)cfg.max_terms, beta, m);
    throw capacity_error("direct_series: tail bound " + std::to_string(bound) +
                             " above tolerance after max_terms",
                         bound);
}

/// zeta^(m)(s) by the Euler-Maclaurin formula differentiated m times in
/// closed form.  Strip-valid reference, fully independent of the AFE path.
inline cplx euler_maclaurin_zeta(cplx s, int m, const OracleConfig& cfg = {}) {
    cfg.validate();
    if (m < 0 || m > 6) throw argument_error("euler_maclaurin_zeta: m must be in 0..6");
    if (std::abs(s - cplx(1, 0)) < 1e-8) throw domain_error("euler_maclaurin_zeta: pole at s = 1");
    if (s.real() < -10.0 || std::abs(s.imag()) > 2000.0)
        throw domain_error("euler_maclaurin_zeta: outside validated window");

    const int N = std::max(20, (int)std::ceil(2.0 * std::abs(s.imag())));
    const double logN = std::log((double)N);
    const int K = 8;

    kahan_sum head;
    for (int n = 1; n < N; ++n) {
        double logn = std::log((double)n);
        head.add(pow_int(-logn, m) * std::exp(-s * logn));
    }
    cplx total = head.value();

    // d^m/ds^m [ N^{1-s} / (s-1) ]
    {
        cplx acc = 0.0;
        double ifact = 1.0;
        cplx spow = 1.0 / (s - 1.0);
        for (int i = 0; i <= m; ++i) {
            acc += binomial(m, i) * pow_int(-logN, m - i) * ifact * ((i % 2) ? -spow : spow);
            ifact *= (i + 1);
            spow /= (s - 1.0);
        }
        total += acc * std::pow((double)N, 1.0 - s.real()) *
                 std::exp(cplx(0, -s.imag() * logN));
    }

    // (-log N)^m N^{-s} / 2
    cplx Npow = std::exp(-s * logN);
    total += 0.5 * pow_int(-logN, m) * Npow;

    // Bernoulli corrections: B_{2k}/(2k)! d^m[ (s)_{2k-1} N^{-s-2k+1} ]
    static const double b2k_fact[] = {1.0 / 12.0,
                                      -1.0 / 720.0,
                                      1.0 / 30240.0,
                                      -1.0 / 1209600.0,
                                      1.0 / 47900160.0,
                                      -691.0 / 1307674368000.0,
                                      1.0 / 74724249600.0,
                                      -3617.0 / 10670622842880000.0};
    std::vector<cplx> poly{1.0}; // rising product s(s+1)...(s+2k-2), coefficient form
    for (int k = 1; k <= K; ++k) {
        // extend polynomial by the two next factors to reach degree 2k-1
        for (int add = (k == 1) ? 1 : 2; add > 0; --add) {
            double shift = double(poly.size() - 1); // multiply by (s + deg)
            poly.push_back(0.0);
            for (std::size_t i = poly.size() - 1; i > 0; --i)
                poly[i] = poly[i - 1] + shift * poly[i];
            poly[0] *= shift;
        }
        // m-th derivative of poly(s) * N^{-s-2k+1} by Leibniz
        cplx acc = 0.0;
        std::vector<cplx> d = poly;
        for (int i = 0; i <= m; ++i) {
            // evaluate current derivative at s
            cplx val = 0.0;
            for (std::size_t c = d.size(); c-- > 0;) val = val * s + d[c];
            acc += binomial(m, i) * val * pow_int(-logN, m - i);
            // differentiate the polynomial
            for (std::size_t c = 1; c < d.size(); ++c) d[c - 1] = double(c) * d[c];
            if (!d.empty()) d.pop_back();
            if (d.empty()) {
                // remaining Leibniz terms vanish
                break;
            }
        }
        total += b2k_fact[k - 1] * acc * std::pow((double)N, 1.0 - 2.0 * k) * Npow;
    }
    return total;
}

/// m-th derivative via the Cauchy integral over a circle, trapezoid rule on
/// 64 (m+1) angles with one node doubling for the error estimate.
inline cplx cauchy_circle(const std::function<cplx(cplx)>& f, cplx s, int m,
                          const OracleConfig& cfg = {}) {
    cfg.validate();
    if (m < 0) throw argument_error("cauchy_circle: m must be nonnegative");
    double r = cfg.circle_radius;
    if (std::abs(s - cplx(1, 0)) < 2.0 * r)
        throw domain_error("cauchy_circle: circle too close to s = 1");

    auto eval = [&](int nodes) {
        kahan_sum acc;
        for (int k = 0; k < nodes; ++k) {
            double theta = 2.0 * constants::pi * k / nodes;
            cplx z = s + r * std::exp(cplx(0, theta));
            acc.add(f(z) * std::exp(cplx(0, -m * theta)));
        }
        double mfact = 1.0;
        for (int i = 2; i <= m; ++i) mfact *= i;
        return mfact * acc.value() / (double(nodes) * std::pow(r, m));
    };
    int n1 = 64 * (m + 1);
    cplx coarse = eval(n1);
    cplx fine = eval(2 * n1);
    double err = std::abs(fine - coarse);
    if (err > std::max(cfg.target_abs_tol, 1e-11 * std::abs(fine)))
        throw accuracy_error("cauchy_circle: node-doubling estimate " + std::to_string(err) +
                                 " above tolerance",
                             err);
    return fine;
}

} // namespace selberg
