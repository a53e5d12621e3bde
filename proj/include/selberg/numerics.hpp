#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <vector>

#include "selberg/errors.hpp"

namespace selberg {

using cplx = std::complex<double>;

namespace constants {
inline constexpr double pi = 3.14159265358979323846264338327950288;
inline constexpr double euler_gamma = 0.577215664901532860606512090082402431;
inline constexpr double log_2pi = 1.83787706640934548356065947281123527;
} // namespace constants

inline int sgn(double t) { return t >= 0.0 ? 1 : -1; }

/// x^w for real x>0 with a pinned branch: exp(w (log x + i phase)).
/// Used for the (rho e^{-i pi sgn(t)/2})^(d_F w/2) factors, which must not go
/// through the principal branch of a merged product.
inline cplx pow_pinned(double x, double phase, cplx w) {
    return std::exp(w * cplx(std::log(x), phase));
}

// Neumaier compensated accumulator, applied component-wise to complex terms.
// Summation order is fixed by the caller, so results are reproducible.
class kahan_sum {
public:
    void add(cplx term) {
        add_part(re_, re_c_, term.real());
        add_part(im_, im_c_, term.imag());
    }
    cplx value() const { return {re_ + re_c_, im_ + im_c_}; }

private:
    static void add_part(double& s, double& c, double x) {
        double t = s + x;
        if (std::abs(s) >= std::abs(x))
            c += (s - t) + x;
        else
            c += (x - t) + s;
        s = t;
    }
    double re_ = 0, re_c_ = 0, im_ = 0, im_c_ = 0;
};

/// x^n for integer n >= 0 by repeated squaring; pow_int(0,0) = 1.
inline double pow_int(double x, int n) {
    double r = 1.0, b = x;
    while (n) {
        if (n & 1) r *= b;
        b *= b;
        n >>= 1;
    }
    return r;
}

inline cplx pow_int(cplx x, int n) {
    cplx r = 1.0, b = x;
    while (n) {
        if (n & 1) r *= b;
        b *= b;
        n >>= 1;
    }
    return r;
}

inline double binomial(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * double(n - k + i) / double(i);
    return std::round(r);
}

/// Gauss-Legendre nodes/weights on [-1,1] by Newton iteration on the
/// recurrence (the usual gauleg construction).  Cached per order.
inline const std::pair<std::vector<double>, std::vector<double>>& gauss_legendre(int n) {
    static std::vector<std::pair<std::vector<double>, std::vector<double>>> cache(65);
    if (n < 1 || n > 64) throw argument_error("gauss_legendre: order out of range");
    auto& entry = cache[static_cast<std::size_t>(n)];
    if (!entry.first.empty()) return entry;

    std::vector<double> x(static_cast<std::size_t>(n)), w(static_cast<std::size_t>(n));
    int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        double z = std::cos(constants::pi * (i + 0.75) / (n + 0.5));
        double z1, pp;
        do {
            double p1 = 1.0, p2 = 0.0;
            for (int j = 0; j < n; ++j) {
                double p3 = p2;
                p2 = p1;
                p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1);
            }
            pp = n * (z * p1 - p2) / (z * z - 1.0);
            z1 = z;
            z = z1 - p1 / pp;
        } while (std::abs(z - z1) > 1e-15);
        x[static_cast<std::size_t>(i)] = -z;
        x[static_cast<std::size_t>(n - 1 - i)] = z;
        w[static_cast<std::size_t>(i)] = 2.0 / ((1.0 - z * z) * pp * pp);
        w[static_cast<std::size_t>(n - 1 - i)] = w[static_cast<std::size_t>(i)];
    }
    entry = {std::move(x), std::move(w)};
    return entry;
}

namespace detail {
inline double adaptive_simpson_rec(const std::function<double(double)>& f, double a, double b,
                                   double fa, double fm, double fb, double whole, double tol,
                                   int depth) {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = f(lm), frm = f(rm);
    double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return adaptive_simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}
} // namespace detail

/// Adaptive Simpson on [a,b].  tol is treated as absolute, widened to
/// tol * |estimate| when the integral is large.
inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                               double tol = 1e-10, int depth = 40) {
    if (!(b > a)) return 0.0;
    // seed with a coarse composite pass so narrow spikes are not missed
    int seed = 64;
    double h = (b - a) / seed;
    double rough = 0.0;
    for (int i = 0; i < seed; ++i) {
        double x0 = a + i * h, x1 = x0 + h, xm = 0.5 * (x0 + x1);
        rough += h / 6.0 * (f(x0) + 4.0 * f(xm) + f(x1));
    }
    double eff_tol = std::max(tol, std::abs(rough) * tol);
    double total = 0.0;
    for (int i = 0; i < seed; ++i) {
        double x0 = a + i * h, x1 = x0 + h, xm = 0.5 * (x0 + x1);
        double fa = f(x0), fm = f(xm), fb = f(x1);
        double whole = h / 6.0 * (fa + 4.0 * fm + fb);
        total += detail::adaptive_simpson_rec(f, x0, x1, fa, fm, fb, whole, eff_tol / seed, depth);
    }
    return total;
}

} // namespace selberg
