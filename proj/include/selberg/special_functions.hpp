#pragma once

#include <cmath>
#include <complex>
#include <string>

#include "selberg/numerics.hpp"

namespace selberg {

namespace detail {

// B_{2k} for the Stirling series, k = 1..15.
inline constexpr double bernoulli_2k[] = {
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
    854513.0 / 138.0,
    -236364091.0 / 2730.0,
    8553103.0 / 6.0,
    -23749461029.0 / 870.0,
    8615841276005.0 / 14322.0,
};

inline constexpr double stirling_shift = 16.0;

inline cplx stirling_log_gamma(cplx z) {
    // valid once Re z is comfortably positive
    cplx lz = std::log(z);
    cplx acc = (z - 0.5) * lz - z + 0.5 * constants::log_2pi;
    cplx zinv2 = 1.0 / (z * z);
    cplx term = 1.0 / z;
    for (int k = 1; k <= 13; ++k) {
        acc += bernoulli_2k[k - 1] / (2.0 * k * (2.0 * k - 1.0)) * term;
        term *= zinv2;
    }
    return acc;
}

} // namespace detail

/// Principal (canonical) log Gamma: analytic on C minus the poles, real on
/// the positive axis, exp(log_gamma(z)) = Gamma(z).  Arguments left of the
/// Stirling region are shifted up with logGamma(z) = logGamma(z+1) - log z,
/// which preserves the canonical branch on the cut plane.
inline cplx log_gamma(cplx z) {
    double rn = std::round(z.real());
    if (rn <= 0.0 && std::abs(z.real() - rn) < 1e-12 && std::abs(z.imag()) < 1e-12)
        throw domain_error("log_gamma: pole at nonpositive integer " + std::to_string((long)rn),
                           (long)rn);
    kahan_sum shift;
    while (z.real() < detail::stirling_shift) {
        shift.add(-std::log(z));
        z += 1.0;
    }
    return detail::stirling_log_gamma(z) + shift.value();
}

namespace detail {

// Domain guard shared by the HAFF series: the series sum_{n>=1} has poles at
// the negative integers; delta is a proximity buffer around them.
inline void haff_pole_guard(cplx s, double delta) {
    double rn = std::round(s.real());
    if (rn <= -1.0) {
        double d = std::hypot(s.real() - rn, s.imag());
        if (d < delta)
            throw domain_error("series pole: s within buffer of negative integer " +
                                   std::to_string((long)rn),
                               (long)rn);
    }
}

// head length such that |s + N| is large enough for the B8-order tail
inline int haff_head_length(cplx s) {
    double lift = 120.0 - std::min(0.0, s.real());
    double n = std::max(1000.0, lift);
    return static_cast<int>(std::ceil(n));
}

} // namespace detail

struct series_value {
    cplx value;
    double tail_error; ///< magnitude of the last tail correction kept (error estimator)
};

/// sum_{n>=1} (s+n)^{-l} for l >= 2 (the polygamma-type series).  Direct head
/// plus an Euler-Maclaurin tail through B8.  `delta` is the pole buffer.
inline series_value haff_sum_l_ex(cplx s, int l, double delta = 0.1) {
    if (l < 2) throw argument_error("haff_sum_l: l must be >= 2");
    detail::haff_pole_guard(s, delta);
    int N = detail::haff_head_length(s);
    kahan_sum head;
    for (int n = 1; n <= N; ++n) {
        cplx base = s + double(n);
        // (s+n)^{-l} by binary powering of the inverse
        cplx inv = 1.0 / base;
        cplx p = 1.0;
        int e = l;
        cplx b = inv;
        while (e) {
            if (e & 1) p *= b;
            b *= b;
            e >>= 1;
        }
        head.add(p);
    }
    cplx z = s + double(N + 1);
    // Euler-Maclaurin from n = N+1: integral + half-term + B2..B8 corrections
    cplx zpow = std::pow(z, cplx(1.0 - l));       // z^{1-l}
    cplx tail = zpow / (double(l) - 1.0);
    cplx zl = zpow / z;                            // z^{-l}
    tail += 0.5 * zl;
    static constexpr double b2k_over_fact[] = {1.0 / 12.0, -1.0 / 720.0, 1.0 / 30240.0,
                                               -1.0 / 1209600.0};
    cplx deriv_pow = zl / z; // z^{-l-1}
    double poch = double(l); // (l)_1
    cplx last{};
    for (int k = 1; k <= 4; ++k) {
        last = b2k_over_fact[k - 1] * poch * deriv_pow;
        tail += last;
        poch *= double(l + 2 * k - 1) * double(l + 2 * k);
        deriv_pow /= z * z;
    }
    return {head.value() + tail, std::abs(last)};
}

inline cplx haff_sum_l(cplx s, int l, double delta = 0.1) {
    return haff_sum_l_ex(s, l, delta).value;
}

/// sum_{n>=1} (1/(s+n) - 1/n), equal to -gamma - psi(s+1).  For |t| >> 1 it
/// behaves like -log|t| - i pi sgn(t)/2 - gamma + O(1/|t|).
inline series_value haff_sum_1_ex(cplx s, double delta = 0.1) {
    detail::haff_pole_guard(s, delta);
    int N = detail::haff_head_length(s);
    kahan_sum head;
    for (int n = 1; n <= N; ++n) {
        // 1/(s+n) - 1/n written as -s/(n(s+n)) to avoid cancellation
        head.add(-s / (double(n) * (s + double(n))));
    }
    double a = double(N + 1);
    cplx z = s + a;
    cplx tail = -(std::log(z) - std::log(a)); // integral of 1/(s+x)-1/x from N+1
    tail += 0.5 * (1.0 / z - 1.0 / a);
    static constexpr double b2k_over_2k[] = {1.0 / 12.0, -1.0 / 120.0, 1.0 / 252.0, -1.0 / 240.0};
    cplx last{};
    for (int k = 1; k <= 4; ++k) {
        cplx zf = std::pow(z, -2.0 * k);
        double af = std::pow(a, -2.0 * k);
        last = b2k_over_2k[k - 1] * (zf - af);
        tail += last;
    }
    return {head.value() + tail, std::abs(last)};
}

inline cplx haff_sum_1(cplx s, double delta = 0.1) { return haff_sum_1_ex(s, delta).value; }

struct gamma_ratio_result {
    cplx exact;   ///< Gamma(lambda(1-s)+conj(mu)) / Gamma(lambda s + mu)
    cplx leading; ///< leading asymptotic form (lambda|t|)^{lambda(1-2 sigma)} e^{i theta}
};

/// Gamma-factor reflection ratio with its large-|t| leading form.  The phase
/// carries the full t log t oscillation:
///   theta = sgn(t)[2 lam|t| - 2(lam|t| + sgn(t) Im mu) log(lam|t|)
///                  - (lam + 2 Re mu - 1) pi/2].
/// The modulus of the leading form matches the exact ratio to O(1/|t|); the
/// phase error grows like (lam sigma + Re mu)^2 / |t|, so the combined gap is
/// c/|t| with c of order max(1, Re mu)^2.
inline gamma_ratio_result gamma_ratio(double lambda, cplx mu, cplx s) {
    double t = s.imag();
    if (std::abs(t) < 2.0) throw argument_error("gamma_ratio: requires |Im s| >= 2");
    cplx exact = std::exp(log_gamma(lambda * (1.0 - s) + std::conj(mu)) -
                          log_gamma(lambda * s + mu));
    double at = std::abs(t);
    double sigma = s.real();
    double sg = sgn(t);
    double lat = lambda * at;
    double theta = sg * (2.0 * lat - 2.0 * (lat + sg * mu.imag()) * std::log(lat) -
                         (lambda + 2.0 * mu.real() - 1.0) * constants::pi / 2.0);
    cplx leading = std::pow(lat, lambda * (1.0 - 2.0 * sigma)) * std::exp(cplx(0.0, theta));
    return {exact, leading};
}

} // namespace selberg
