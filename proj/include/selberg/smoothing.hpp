#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <vector>

#include "selberg/numerics.hpp"
#include "selberg/partitions.hpp"

namespace selberg {

namespace detail {

// e^{-1/x} glue.  psi^{(n)}(x) = e^{-1/x} P_n(1/x) with the polynomial
// recursion P_{n+1}(v) = v^2 (P_n(v) - P_n'(v)); below the underflow knee
// every derivative is an exact machine zero.
class exp_glue {
public:
    static constexpr int max_order = 14;

    exp_glue() {
        polys_.push_back({1.0});
        for (int n = 0; n < max_order; ++n) {
            const auto& P = polys_.back();
            std::vector<double> next(P.size() + 2, 0.0);
            for (std::size_t c = 0; c < P.size(); ++c) {
                next[c + 2] += P[c];
                if (c >= 1) next[c + 1] -= double(c) * P[c];
            }
            polys_.push_back(std::move(next));
        }
    }

    // psi and derivatives at x; zero (exactly) for x <= underflow knee
    void derivs(double x, int jmax, double* out) const {
        if (x <= 0.0013425 || x <= 0.0) {
            for (int j = 0; j <= jmax; ++j) out[j] = 0.0;
            return;
        }
        double e = std::exp(-1.0 / x);
        double v = 1.0 / x;
        for (int j = 0; j <= jmax; ++j) {
            const auto& P = polys_[(std::size_t)j];
            double acc = 0.0;
            for (std::size_t c = P.size(); c-- > 0;) acc = acc * v + P[c];
            out[j] = e * acc;
        }
    }

private:
    std::vector<std::vector<double>> polys_;
};

inline const exp_glue& glue() {
    static exp_glue g;
    return g;
}

// h(x) = psi(x) / (psi(x) + psi(1-x)): 0 at x<=0, 1 at x>=1, C-infinity.
// All derivative orders at once via the Leibniz solve of h * g = psi.
inline void smoothstep_derivs(double x, int jmax, double* out) {
    if (x <= 0.0) {
        for (int j = 0; j <= jmax; ++j) out[j] = 0.0;
        return;
    }
    if (x >= 1.0) {
        out[0] = 1.0;
        for (int j = 1; j <= jmax; ++j) out[j] = 0.0;
        return;
    }
    double ps[exp_glue::max_order + 1], pc[exp_glue::max_order + 1];
    glue().derivs(x, jmax, ps);
    glue().derivs(1.0 - x, jmax, pc);
    double g[exp_glue::max_order + 1];
    for (int n = 0; n <= jmax; ++n) g[n] = ps[n] + ((n % 2) ? -pc[n] : pc[n]);
    for (int n = 0; n <= jmax; ++n) {
        double acc = ps[n];
        for (int k = 0; k < n; ++k) acc -= binomial(n, k) * out[k] * g[n - k];
        out[n] = acc / g[0];
    }
}

} // namespace detail

class smoothing_impl;

/// A member of the cutoff family (or the sharp cutoff xi): phi = 1 on an
/// initial segment, 0 beyond the support, smooth in between, with derivative
/// evaluations and memoized L1 norms.  Value-type wrapper over a shared
/// immutable implementation.
class SmoothingFunction {
public:
    explicit SmoothingFunction(std::shared_ptr<const smoothing_impl> impl)
        : impl_(std::move(impl)) {}

    double eval(int j, double rho) const;
    double operator()(double rho) const { return eval(0, rho); }
    double l1_norm(int j) const;
    /// [rho_lo, rho_hi]: phi = 1 left of rho_lo, 0 right of rho_hi, and all
    /// derivatives vanish outside the open interval.
    std::pair<double, double> support() const;
    bool is_sharp() const;
    std::optional<double> alpha() const;
    /// phi_0(rho) = 1 - phi(1/rho), again a member of the family.
    SmoothingFunction dual() const;

private:
    std::shared_ptr<const smoothing_impl> impl_;
};

class smoothing_impl : public std::enable_shared_from_this<smoothing_impl> {
public:
    static constexpr int max_derivative = 13;

    virtual ~smoothing_impl() = default;
    virtual double eval(int j, double rho) const = 0;
    virtual std::pair<double, double> support() const = 0;
    virtual bool is_sharp() const { return false; }
    virtual std::optional<double> alpha() const { return std::nullopt; }

    double l1_norm(int j) const {
        if (j < 0 || j > max_derivative)
            throw argument_error("smoothing: derivative order out of range");
        std::lock_guard<std::mutex> lock(norm_mutex_);
        auto it = norms_.find(j);
        if (it != norms_.end()) return it->second;
        double value;
        if (j == 0) {
            value = std::numeric_limits<double>::infinity(); // phi ~ 1 near 0
            auto [lo, hi] = support();
            if (lo > 0.0)
                value = lo + adaptive_simpson([&](double x) { return std::abs(eval(0, x)); }, lo,
                                              hi, 1e-10);
        } else {
            auto [lo, hi] = support();
            value = adaptive_simpson([&](double x) { return std::abs(eval(j, x)); }, lo, hi,
                                     1e-10);
        }
        norms_.emplace(j, value);
        return value;
    }

protected:
    void check_order(int j) const {
        if (j < 0 || j > max_derivative)
            throw argument_error("smoothing: derivative order out of range (max " +
                                 std::to_string(max_derivative) + ")");
    }

private:
    mutable std::mutex norm_mutex_;
    mutable std::map<int, double> norms_;
};

inline double SmoothingFunction::eval(int j, double rho) const { return impl_->eval(j, rho); }
inline double SmoothingFunction::l1_norm(int j) const { return impl_->l1_norm(j); }
inline std::pair<double, double> SmoothingFunction::support() const { return impl_->support(); }
inline bool SmoothingFunction::is_sharp() const { return impl_->is_sharp(); }
inline std::optional<double> SmoothingFunction::alpha() const { return impl_->alpha(); }

namespace detail {

// phi(rho) = h((2 - rho)/1.5): 1 on [0,1/2], 0 on [2,inf)
class base_bump_impl final : public smoothing_impl {
public:
    double eval(int j, double rho) const override {
        check_order(j);
        if (rho < 0.0) throw argument_error("smoothing: rho must be nonnegative");
        if (rho <= 0.5) return j == 0 ? 1.0 : 0.0;
        if (rho >= 2.0) return 0.0;
        double u = (2.0 - rho) / 1.5;
        double h[exp_glue::max_order + 1];
        smoothstep_derivs(u, j, h);
        return h[j] * pow_int(-1.0 / 1.5, j);
    }
    std::pair<double, double> support() const override { return {0.5, 2.0}; }
};

// the affine reparametrization around rho = 1 used by the sharp-cutoff proof
class phi_alpha_impl final : public smoothing_impl {
public:
    phi_alpha_impl(std::shared_ptr<const smoothing_impl> base, double alpha, double t)
        : base_(std::move(base)), alpha_(alpha), scale_(std::pow(std::abs(t), alpha)) {
        lo_ = 1.0 - 0.5 / scale_;
        hi_ = 1.0 + 1.0 / scale_;
    }

    double eval(int j, double rho) const override {
        check_order(j);
        if (rho < 0.0) throw argument_error("smoothing: rho must be nonnegative");
        if (rho <= lo_) return j == 0 ? 1.0 : 0.0;
        if (rho >= hi_) return 0.0;
        double inner = 1.0 + (rho - 1.0) * scale_;
        return base_->eval(j, inner) * pow_int(scale_, j);
    }
    std::pair<double, double> support() const override { return {lo_, hi_}; }
    std::optional<double> alpha() const override { return alpha_; }

private:
    std::shared_ptr<const smoothing_impl> base_;
    double alpha_, scale_, lo_, hi_;
};

// phi_0(rho) = 1 - phi(1/rho); derivatives through the composition rule with
// g(rho) = 1/rho, g^(i) = (-1)^i i! rho^{-i-1}
class dual_impl final : public smoothing_impl {
public:
    explicit dual_impl(std::shared_ptr<const smoothing_impl> primal) : primal_(std::move(primal)) {
        auto [lo, hi] = primal_->support();
        lo_ = 1.0 / hi;
        hi_ = 1.0 / lo;
    }

    double eval(int j, double rho) const override {
        check_order(j);
        if (rho < 0.0) throw argument_error("smoothing: rho must be nonnegative");
        if (rho == 0.0) return j == 0 ? 1.0 : 0.0;
        if (rho <= lo_) return j == 0 ? 1.0 : 0.0;
        if (rho >= hi_) return 0.0;
        double inv = 1.0 / rho;
        if (j == 0) return 1.0 - primal_->eval(0, inv);
        // Faa di Bruno over partitions of j
        double inner[smoothing_impl::max_derivative + 1];
        for (int k = 1; k <= j; ++k) inner[k] = primal_->eval(k, inv);
        double g_pow[smoothing_impl::max_derivative + 1];
        double fact = 1.0;
        for (int i = 1; i <= j; ++i) {
            fact *= i;
            g_pow[i] = ((i % 2) ? -1.0 : 1.0) * fact * std::pow(rho, -double(i + 1));
        }
        kahan_sum acc;
        for_each_partition(j, [&](const std::vector<int>& mult) {
            int blocks = 0;
            double prod = double(partition_multinomial(mult));
            for (int i = 1; i <= j; ++i) {
                int li = mult[(std::size_t)i];
                if (!li) continue;
                blocks += li;
                prod *= pow_int(g_pow[i], li);
            }
            acc.add(cplx(prod * inner[blocks], 0.0));
        });
        return -acc.value().real();
    }
    std::pair<double, double> support() const override { return {lo_, hi_}; }
    std::optional<double> alpha() const override { return primal_->alpha(); }

private:
    std::shared_ptr<const smoothing_impl> primal_;
    double lo_, hi_;
};

// xi: 1 on [0,1], 0 beyond; representable but rejected where smoothness is
// required
class sharp_impl final : public smoothing_impl {
public:
    double eval(int j, double rho) const override {
        check_order(j);
        if (rho < 0.0) throw argument_error("smoothing: rho must be nonnegative");
        if (j > 0)
            throw smoothness_error("sharp cutoff xi has no derivatives");
        return rho <= 1.0 ? 1.0 : 0.0;
    }
    std::pair<double, double> support() const override { return {1.0, 1.0}; }
    bool is_sharp() const override { return true; }
};

} // namespace detail

inline SmoothingFunction SmoothingFunction::dual() const {
    if (impl_->is_sharp()) {
        // 1 - xi(1/rho) is xi again apart from the boundary point
        return SmoothingFunction(std::make_shared<detail::sharp_impl>());
    }
    return SmoothingFunction(std::make_shared<detail::dual_impl>(impl_));
}

/// The concrete C-infinity member built from e^{-1/x} glue: 1 on [0,1/2],
/// 0 on [2,inf), monotone in between, derivatives available to order 13.
inline SmoothingFunction base_bump() {
    return SmoothingFunction(std::make_shared<detail::base_bump_impl>());
}

inline SmoothingFunction sharp_cutoff() {
    return SmoothingFunction(std::make_shared<detail::sharp_impl>());
}

/// phi_alpha: 1 on [0, 1-(2|t|^a)^{-1}], phi(1+(rho-1)|t|^a) on the
/// transition window, 0 from 1+|t|^{-a} on.  Requires alpha in [0, 1/2]
/// and |t| >= 10.
inline SmoothingFunction make_phi_alpha(const SmoothingFunction& phi, double alpha, double t) {
    if (alpha < 0.0 || alpha > 0.5)
        throw argument_error("make_phi_alpha: alpha must lie in [0, 1/2]");
    if (std::abs(t) < 10.0)
        throw argument_error("make_phi_alpha: requires |t| >= 10");
    if (phi.is_sharp()) throw smoothness_error("make_phi_alpha: base function must be smooth");
    // the construction only reads phi through eval, so wrap the passed value
    class wrapper final : public smoothing_impl {
    public:
        explicit wrapper(SmoothingFunction fn) : fn_(std::move(fn)) {}
        double eval(int j, double rho) const override { return fn_.eval(j, rho); }
        std::pair<double, double> support() const override { return fn_.support(); }
    private:
        SmoothingFunction fn_;
    };
    return SmoothingFunction(
        std::make_shared<detail::phi_alpha_impl>(std::make_shared<wrapper>(phi), alpha, t));
}

/// Mellin-type kernel K_phi(w).  For Re w > 0 it is w int phi rho^{w-1} drho;
/// everywhere it is computed through the integration-by-parts form of order
/// l, whose prefactor poles at w = -1..-l are sidestepped by dropping to the
/// pole-free order k-1.
inline cplx mellin_K(const SmoothingFunction& phi, cplx w, int l = 2) {
    if (l < 0 || l > 12) throw argument_error("mellin_K: l must lie in 0..12");
    if (phi.is_sharp()) {
        if (w.real() > 0.0) return cplx(1.0, 0.0); // w int_0^1 rho^{w-1} = 1
        throw smoothness_error("mellin_K: sharp cutoff defined only for Re w > 0");
    }
    // removable prefactor pole: use the shorter integration-by-parts form
    for (int k = 1; k <= l; ++k)
        if (std::abs(w + double(k)) < 0.25) {
            l = k - 1;
            break;
        }
    auto [lo, hi] = phi.support();
    // (-1)^{l+1} / ((w+1)...(w+l)) * int phi^{(l+1)} rho^{w+l}
    cplx prefactor = ((l + 1) % 2) ? -1.0 : 1.0;
    for (int k = 1; k <= l; ++k) prefactor /= (w + double(k));
    cplx integral;
    {
        auto re = adaptive_simpson(
            [&](double rho) {
                return phi.eval(l + 1, rho) * std::pow(rho, w.real() + l) *
                       std::cos(w.imag() * std::log(rho));
            },
            lo, hi, 1e-12);
        auto im = adaptive_simpson(
            [&](double rho) {
                return phi.eval(l + 1, rho) * std::pow(rho, w.real() + l) *
                       std::sin(w.imag() * std::log(rho));
            },
            lo, hi, 1e-12);
        integral = cplx(re, im);
    }
    return prefactor * integral;
}

/// Defining integral w int_0^inf phi(rho) rho^{w-1} drho, Re w > 0 only.
/// Used as the independent side in kernel identity tests.
inline cplx mellin_K_defining(const SmoothingFunction& phi, cplx w) {
    if (!(w.real() > 0.0))
        throw domain_error("mellin_K_defining: requires Re w > 0");
    if (phi.is_sharp()) return cplx(1.0, 0.0);
    auto [lo, hi] = phi.support();
    auto re = adaptive_simpson(
        [&](double rho) {
            return phi.eval(0, rho) * std::pow(rho, w.real() - 1.0) *
                   std::cos(w.imag() * std::log(rho));
        },
        lo, hi, 1e-12);
    auto im = adaptive_simpson(
        [&](double rho) {
            return phi.eval(0, rho) * std::pow(rho, w.real() - 1.0) *
                   std::sin(w.imag() * std::log(rho));
        },
        lo, hi, 1e-12);
    // flat region [0, lo] contributes lo^w exactly
    return pow_pinned(lo, 0.0, w) + w * cplx(re, im);
}

} // namespace selberg
