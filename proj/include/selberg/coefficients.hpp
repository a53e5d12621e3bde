#pragma once

#include <cstdint>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "selberg/numerics.hpp"

namespace selberg {

enum class coefficient_kind { zeta, cusp_form_delta, rankin_selberg, user_table };

inline const char* to_string(coefficient_kind k) {
    switch (k) {
        case coefficient_kind::zeta: return "zeta";
        case coefficient_kind::cusp_form_delta: return "delta";
        case coefficient_kind::rankin_selberg: return "rankin_selberg";
        case coefficient_kind::user_table: return "table";
    }
    return "?";
}

namespace detail {

using int128 = __int128_t;

/// Exact integer tau table: Delta = q prod (1-q^n)^24 expanded with the
/// pentagonal-number form of prod (1-q^n), applied 24 times in place.
/// Returns tau(1..nmax).
inline std::vector<int128> tau_table_exact(int nmax) {
    if (nmax < 1) throw argument_error("tau table: nmax must be >= 1");
    if (nmax > 100000) throw capacity_error("tau table: exact generation capped at n <= 1e5");
    const int order = nmax; // coefficients of E^24 up to q^{nmax-1}
    // pentagonal exponents with signs: 1 - q - q^2 + q^5 + q^7 - q^12 - ...
    std::vector<std::pair<int, int>> pent;
    for (int k = 1;; ++k) {
        long e1 = (long)k * (3L * k - 1) / 2;
        long e2 = (long)k * (3L * k + 1) / 2;
        int sign = (k % 2) ? -1 : 1;
        if (e1 < order) pent.emplace_back((int)e1, sign);
        if (e2 < order) pent.emplace_back((int)e2, sign);
        if (e1 >= order && e2 >= order) break;
    }
    std::vector<int128> c(static_cast<std::size_t>(order), 0);
    c[0] = 1;
    const int128 guard = (int128)1 << 120;
    for (int rep = 0; rep < 24; ++rep) {
        for (int i = order - 1; i >= 1; --i) {
            int128 acc = c[static_cast<std::size_t>(i)];
            for (auto [e, sign] : pent) {
                if (e > i) break;
                if (sign > 0)
                    acc += c[static_cast<std::size_t>(i - e)];
                else
                    acc -= c[static_cast<std::size_t>(i - e)];
            }
            c[static_cast<std::size_t>(i)] = acc;
        }
        for (int i = 0; i < order; ++i) {
            int128 v = c[static_cast<std::size_t>(i)];
            if (v > guard || -v > guard)
                throw capacity_error("tau table: intermediate coefficient overflow guard hit");
        }
    }
    std::vector<int128> tau(static_cast<std::size_t>(nmax) + 1, 0);
    for (int n = 1; n <= nmax; ++n) tau[static_cast<std::size_t>(n)] = c[static_cast<std::size_t>(n - 1)];
    return tau;
}

inline double int128_to_double(int128 v) {
    bool neg = v < 0;
    if (neg) v = -v;
    double hi = double((std::uint64_t)(v >> 64));
    double lo = double((std::uint64_t)v);
    double r = hi * 18446744073709551616.0 + lo;
    return neg ? -r : r;
}

} // namespace detail

/// Dirichlet coefficient supplier.  The cache is an immutable snapshot swapped
/// under a mutex, so concurrent readers always see a consistent prefix and
/// extension never changes previously returned values.
class CoefficientSource {
public:
    static std::shared_ptr<CoefficientSource> make_zeta() {
        return std::shared_ptr<CoefficientSource>(
            new CoefficientSource(coefficient_kind::zeta, 0.0));
    }
    static std::shared_ptr<CoefficientSource> make_delta() {
        return std::shared_ptr<CoefficientSource>(
            new CoefficientSource(coefficient_kind::cusp_form_delta, 0.1));
    }
    static std::shared_ptr<CoefficientSource> make_rankin_selberg() {
        return std::shared_ptr<CoefficientSource>(
            new CoefficientSource(coefficient_kind::rankin_selberg, 0.2));
    }
    static std::shared_ptr<CoefficientSource> make_table(std::vector<cplx> values,
                                                         double growth_epsilon = 0.3) {
        auto src = std::shared_ptr<CoefficientSource>(
            new CoefficientSource(coefficient_kind::user_table, growth_epsilon));
        src->table_ = std::move(values); // table_[i] is a(i+1)
        return src;
    }

    coefficient_kind kind() const { return kind_; }
    double growth_epsilon() const { return growth_epsilon_; }

    /// a_F(1..n_max); snapshot with at least n_max entries after index 0.
    std::shared_ptr<const std::vector<cplx>> prefix(int n_max) const {
        if (n_max < 1) throw argument_error("coefficients: n_max must be >= 1");
        {
            std::lock_guard<std::mutex> lock(mutex_);
            if (cache_ && (int)cache_->size() > n_max) return cache_;
        }
        auto grown = std::make_shared<std::vector<cplx>>(generate(n_max));
        std::lock_guard<std::mutex> lock(mutex_);
        if (!cache_ || cache_->size() < grown->size()) cache_ = grown;
        return cache_;
    }

    std::vector<cplx> take(int n_max) const {
        auto snap = prefix(n_max);
        return std::vector<cplx>(snap->begin() + 1, snap->begin() + 1 + n_max);
    }

    /// Conjugated view of the same coefficients (for the bar-datum).
    std::shared_ptr<CoefficientSource> conjugated() const {
        if (kind_ != coefficient_kind::user_table) return nullptr; // built-ins are real
        std::vector<cplx> conj_table(table_.size());
        for (std::size_t i = 0; i < table_.size(); ++i) conj_table[i] = std::conj(table_[i]);
        return make_table(std::move(conj_table), growth_epsilon_);
    }

    bool real_coefficients() const {
        if (kind_ != coefficient_kind::user_table) return true;
        for (const auto& v : table_)
            if (v.imag() != 0.0) return false;
        return true;
    }

private:
    CoefficientSource(coefficient_kind kind, double eps) : kind_(kind), growth_epsilon_(eps) {}

    std::vector<cplx> generate(int n_max) const {
        // grow in powers of two so repeated extension stays cheap
        int target = 1;
        while (target < n_max) target *= 2;
        if (kind_ == coefficient_kind::user_table) target = n_max;

        std::vector<cplx> out(static_cast<std::size_t>(target) + 1, cplx(0, 0));
        switch (kind_) {
            case coefficient_kind::zeta:
                for (int n = 1; n <= target; ++n) out[static_cast<std::size_t>(n)] = 1.0;
                break;
            case coefficient_kind::cusp_form_delta: {
                auto tau = detail::tau_table_exact(target);
                for (int n = 1; n <= target; ++n)
                    out[static_cast<std::size_t>(n)] =
                        detail::int128_to_double(tau[static_cast<std::size_t>(n)]) /
                        std::pow(double(n), 5.5);
                break;
            }
            case coefficient_kind::rankin_selberg: {
                // lambda_f(n) * conj(lambda_g(n)) with f = g = Delta
                auto tau = detail::tau_table_exact(target);
                for (int n = 1; n <= target; ++n) {
                    double lam = detail::int128_to_double(tau[static_cast<std::size_t>(n)]) /
                                 std::pow(double(n), 5.5);
                    out[static_cast<std::size_t>(n)] = lam * lam;
                }
                break;
            }
            case coefficient_kind::user_table: {
                if ((int)table_.size() < n_max)
                    throw capacity_error("coefficient table too short: need " +
                                             std::to_string(n_max) + " entries, have " +
                                             std::to_string(table_.size()),
                                         double(table_.size()));
                for (int n = 1; n <= n_max; ++n) out[static_cast<std::size_t>(n)] = table_[static_cast<std::size_t>(n - 1)];
                break;
            }
        }
        return out;
    }

    coefficient_kind kind_;
    double growth_epsilon_;
    std::vector<cplx> table_;
    mutable std::mutex mutex_;
    mutable std::shared_ptr<const std::vector<cplx>> cache_;
};

} // namespace selberg
