#pragma once

#include <algorithm>
#include <vector>

#include "selberg/calibration.hpp"
#include "selberg/chi_factor.hpp"
#include "selberg/smoothing.hpp"

namespace selberg {

/// The stadium path around w = 0: semicircles of radius sqrt|t| at
/// -1/2 - sigma and 3/2 - sigma joined by horizontal segments at height
/// +- sqrt|t|, traversed counterclockwise.
struct ContourSpec {
    double sigma = 0.0;
    double t = 0.0;
    double radius = 0.0;
    int nodes_per_unit = 16;

    static ContourSpec for_point(cplx s, int density = 16) {
        ContourSpec c;
        c.sigma = s.real();
        c.t = s.imag();
        c.radius = std::sqrt(std::abs(s.imag()));
        c.nodes_per_unit = density;
        return c;
    }

    double left_center() const { return -0.5 - sigma; }
    double right_center() const { return 1.5 - sigma; }

    /// Composite Gauss-Legendre pass over the closed path; calls
    /// visit(w, weight) where weight already contains dw and the panel
    /// scaling, so sum weight * f(w) approximates the contour integral.
    template <typename Visitor>
    void for_each_node(Visitor&& visit) const {
        const auto& [gx, gw] = gauss_legendre(16);
        double R = radius;
        auto run_segment = [&](double length, auto&& param) {
            int panels = std::max(1, (int)std::ceil(length * nodes_per_unit / 16.0));
            for (int p = 0; p < panels; ++p) {
                double a = double(p) / panels, b = double(p + 1) / panels;
                double mid = 0.5 * (a + b), half = 0.5 * (b - a);
                for (std::size_t k = 0; k < gx.size(); ++k) {
                    double tau = mid + half * gx[k];
                    auto [w, dw] = param(tau);
                    visit(w, dw * (gw[k] * half));
                }
            }
        };
        // right semicircle, angle -pi/2 -> pi/2
        run_segment(constants::pi * R, [&](double tau) {
            cplx dir = std::exp(cplx(0, constants::pi * (tau - 0.5)));
            return std::pair<cplx, cplx>(right_center() + R * dir,
                                         cplx(0, constants::pi) * R * dir);
        });
        // top segment, Re w from 3/2-sigma to -1/2-sigma
        run_segment(2.0, [&](double tau) {
            return std::pair<cplx, cplx>(cplx(right_center() - 2.0 * tau, R), cplx(-2.0, 0));
        });
        // left semicircle, angle pi/2 -> 3pi/2
        run_segment(constants::pi * R, [&](double tau) {
            cplx dir = std::exp(cplx(0, constants::pi * (tau + 0.5)));
            return std::pair<cplx, cplx>(left_center() + R * dir,
                                         cplx(0, constants::pi) * R * dir);
        });
        // bottom segment, Re w from -1/2-sigma to 3/2-sigma
        run_segment(2.0, [&](double tau) {
            return std::pair<cplx, cplx>(cplx(left_center() + 2.0 * tau, -R), cplx(2.0, 0));
        });
    }

    /// Distance from a real point to the path (used for the pole guard).
    double distance_to_path(double p) const {
        double d_interval = std::max({0.0, left_center() - p, p - right_center()});
        return std::abs(radius - d_interval);
    }
};

enum class coeff_variant { gamma, delta };

namespace detail {

// log of the pole-clearing polynomial g_F (or its bar form): the Gamma-index
// product is written out factor by factor; the total is exponentiated by the
// caller so per-factor principal logs are safe.
inline cplx log_g_regularizer(const SelbergDatum& datum, const DerivedConstants& dc, cplx z,
                              int m, bool bar) {
    cplx acc = double(datum.pole_order + m) * (std::log(z) + std::log(1.0 - z));
    for (int j = 0; j < datum.q(); ++j) {
        if (datum.mus[(std::size_t)j].real() > 0.5 * datum.lambdas[(std::size_t)j]) continue;
        double lam = datum.lambdas[(std::size_t)j];
        cplx mu = datum.mus[(std::size_t)j];
        cplx mu1 = bar ? std::conj(mu) : mu; // factor carried at z
        cplx mu2 = bar ? mu : std::conj(mu); // reflected factor at 1-z
        cplx factor = 0.0;
        for (int n = 0; n <= dc.nu[(std::size_t)j]; ++n)
            factor += std::log(lam * z + mu1 - double(n)) +
                      std::log(lam * (1.0 - z) + mu2 - double(n));
        acc += double(m + 1) * factor;
    }
    return acc;
}

} // namespace detail

/// g_F(s) = (s(1-s))^{p_F+m} prod_j (A_j(s) conj-A_j(1-s))^{m+1}, the
/// polynomial clearing the poles of F^(m) and of the Gamma factors inside
/// the shifted-contour region.
inline cplx g_regularizer(const SelbergDatum& datum, cplx s, int m) {
    auto dc = derived_constants(datum);
    cplx base = pow_int(s * (1.0 - s), datum.pole_order + m);
    cplx prod = 1.0;
    for (int j = 0; j < datum.q(); ++j) {
        if (datum.mus[(std::size_t)j].real() > 0.5 * datum.lambdas[(std::size_t)j]) continue;
        double lam = datum.lambdas[(std::size_t)j];
        cplx mu = datum.mus[(std::size_t)j];
        cplx f = 1.0;
        for (int n = 0; n <= dc.nu[(std::size_t)j]; ++n)
            f *= (lam * s + mu - double(n)) * (lam * (1.0 - s) + std::conj(mu) - double(n));
        prod *= pow_int(f, m + 1);
    }
    return base * prod;
}

/// Table of the contour coefficients gamma_j^(r) (or delta_j^(r)) at one
/// argument: values for j = 0..j_max, r = 0..r_max, with node-doubling
/// relative error estimates.
struct CoefficientTable {
    int j_max = 0, r_max = 0;
    std::vector<cplx> values;
    std::vector<double> rel_errors;

    cplx at(int j, int r) const { return values[(std::size_t)(j * (r_max + 1) + r)]; }
    double err(int j, int r) const { return rel_errors[(std::size_t)(j * (r_max + 1) + r)]; }
};

/// Evaluates the whole (j, r) family over the stadium path in one pass per
/// node density.  s_arg is the argument of the coefficient itself (1-s for
/// the delta family in the reflected sum); rho is pinned to the value
/// 1/((prod lambda^lambda)^{2/d_F} |t|) the reduction lemma prescribes.
inline CoefficientTable gamma_delta_table(const SelbergDatum& datum, cplx s_arg, int m, int j_max,
                                          int r_max, coeff_variant variant, int density = 16) {
    if (std::abs(s_arg.imag()) < 10.0)
        throw domain_error("contour coefficients: require |Im s| >= 10");
    if (j_max < 0 || j_max > 12) throw capacity_error("contour coefficients: j capped at 12");
    if (r_max < 0 || r_max > 6) throw capacity_error("contour coefficients: r capped at 6");
    datum.validate();
    auto dc = derived_constants(datum);

    ContourSpec contour = ContourSpec::for_point(s_arg, density);
    // The reduction behind these coefficients captures the residues of every
    // prefactor pole 0..-j_max; its estimates implicitly need sqrt|t| to
    // exceed j_max so all of them sit inside the stadium with room to spare.
    // When t is too small for that (or the radius grazes a pole) the path is
    // widened to the minimal radius enclosing all poles with clearance 0.3;
    // every bound in the proof only uses |w| of order sqrt|t|, so the
    // identity and its error control survive the change verbatim.
    const double min_clearance = 0.3;
    double shift = 0.0;
    {
        auto pole_distance = [&](int p) {
            return std::max({0.0, contour.left_center() + double(p),
                             -double(p) - contour.right_center()});
        };
        double needed = 0.0;
        for (int p = 0; p <= j_max; ++p) needed = std::max(needed, pole_distance(p));
        double R = std::max(contour.radius, needed + min_clearance);
        for (int p = 0; p <= j_max; ++p)
            if (std::abs(R - pole_distance(p)) < min_clearance)
                R = pole_distance(p) + min_clearance;
        shift = R - contour.radius;
        if (std::abs(s_arg.imag()) < 10.0 || R > 2.0 * contour.radius + 1.0)
            throw contour_error("contour cannot clear the prefactor poles; increase |t|");
    }

    double sg = sgn(s_arg.imag());
    double lam_log = 0.0;
    for (double lam : datum.lambdas) lam_log += lam * std::log(lam);
    double log_rho = -(2.0 / dc.d_F) * lam_log - std::log(std::abs(s_arg.imag()));
    cplx rho_phase = cplx(log_rho, -sg * constants::pi / 2.0) * (0.5 * dc.d_F);

    // parts of the integrand that do not move with w
    std::vector<cplx> lg_den((std::size_t)datum.q());
    for (int j = 0; j < datum.q(); ++j) {
        cplx mu = datum.mus[(std::size_t)j];
        if (variant == coeff_variant::delta) mu = std::conj(mu);
        lg_den[(std::size_t)j] = log_gamma(datum.lambdas[(std::size_t)j] * s_arg + mu);
    }
    cplx log_g_at_s =
        detail::log_g_regularizer(datum, dc, s_arg, m, variant == coeff_variant::delta);

    auto run = [&](int dens) {
        std::vector<kahan_sum> acc((std::size_t)((j_max + 1) * (r_max + 1)));
        ContourSpec c = contour;
        c.radius = contour.radius + shift;
        c.nodes_per_unit = dens;
        c.for_each_node([&](cplx w, cplx weight) {
            cplx z = s_arg + w;
            cplx L = rho_phase * w - log_g_at_s +
                     detail::log_g_regularizer(datum, dc, z, m, variant == coeff_variant::delta);
            for (int j = 0; j < datum.q(); ++j) {
                cplx mu = datum.mus[(std::size_t)j];
                if (variant == coeff_variant::delta) mu = std::conj(mu);
                L += log_gamma(datum.lambdas[(std::size_t)j] * z + mu) - lg_den[(std::size_t)j];
            }
            cplx base = std::exp(L) * weight;
            // chi^{(r)}/chi at 1-(s+w), all orders at once
            std::vector<cplx> ratios((std::size_t)r_max + 1, cplx(1.0, 0.0));
            if (r_max >= 1) {
                std::vector<cplx> towers((std::size_t)r_max + 1);
                for (int l = 1; l <= r_max; ++l) towers[(std::size_t)l] = g_tower(datum, 1.0 - z, l);
                for (int r = 1; r <= r_max; ++r) {
                    const auto& bell = bell_expansion(r);
                    cplx sum = 0.0;
                    for (const auto& term : bell.terms) {
                        cplx prod(double(term.coefficient), 0.0);
                        for (int i = 1; i <= r; ++i)
                            if (term.multiplicities[(std::size_t)i])
                                prod *= pow_int(towers[(std::size_t)i],
                                                term.multiplicities[(std::size_t)i]);
                        sum += prod;
                    }
                    ratios[(std::size_t)r] = sum;
                }
            }
            cplx pole_factor = 1.0 / w;
            for (int j = 0; j <= j_max; ++j) {
                if (j > 0) pole_factor /= (w + double(j));
                for (int r = 0; r <= r_max; ++r)
                    acc[(std::size_t)(j * (r_max + 1) + r)].add(base * pole_factor *
                                                               ratios[(std::size_t)r]);
            }
        });
        std::vector<cplx> out(acc.size());
        const cplx inv_2pii = 1.0 / cplx(0.0, 2.0 * constants::pi);
        for (std::size_t i = 0; i < acc.size(); ++i) out[i] = acc[i].value() * inv_2pii;
        return out;
    };

    auto coarse = run(density);
    auto fine = run(2 * density);

    CoefficientTable table;
    table.j_max = j_max;
    table.r_max = r_max;
    table.values = fine;
    table.rel_errors.resize(fine.size());
    for (std::size_t i = 0; i < fine.size(); ++i)
        table.rel_errors[i] = std::abs(fine[i] - coarse[i]) / std::max(1e-14, std::abs(fine[i]));
    return table;
}

/// Single contour coefficient with its quadrature contract enforced.
inline cplx gamma_delta_coeff(const SelbergDatum& datum, cplx s_arg, int j, int r,
                              coeff_variant variant, int m = -1) {
    if (j < 0) throw argument_error("gamma_delta_coeff: j must be nonnegative");
    if (r < 0) throw argument_error("gamma_delta_coeff: r must be nonnegative");
    if (m < 0) m = r;
    auto table = gamma_delta_table(datum, s_arg, m, j, r, variant);
    double err = table.err(j, r);
    if (err > 1e-6 && std::abs(table.at(j, r)) > 1e-10)
        throw accuracy_error("gamma_delta_coeff: quadrature estimate " + std::to_string(err) +
                                 " above contract",
                             err);
    return table.at(j, r);
}

enum class afe_mode { sharp, smoothed };

struct AfeResult {
    cplx value;
    cplx main_sum_1;
    cplx main_sum_2;
    cplx correction{0.0, 0.0};
    double error_estimate = 0.0;
    double y1 = 0.0, y2 = 0.0;
    afe_mode mode = afe_mode::sharp;
    /// largest |term| entries per main sum: (n, magnitude)
    std::vector<std::pair<long, double>> diagnostics;
};

namespace detail {

struct term_tracker {
    void observe(long n, double mag) {
        if (top.size() < 5 || mag > top.back().second) {
            top.emplace_back(n, mag);
            std::sort(top.begin(), top.end(),
                      [](auto& a, auto& b) { return a.second > b.second; });
            if (top.size() > 5) top.pop_back();
        }
    }
    std::vector<std::pair<long, double>> top;
};

inline void afe_preconditions(const SelbergDatum& datum, cplx s, int m) {
    datum.validate();
    if (m < 0 || m > 6) throw capacity_error("afe: m capped at 6");
    if (s.real() < 0.0 || s.real() > 1.0)
        throw hypothesis_error("afe: sigma outside [0,1]", s.real());
    if (std::abs(s.imag()) < 10.0) throw domain_error("afe: requires |Im s| >= 10");
}

inline double log_plus(double y) { return std::max(1.0, std::log(y)); }

} // namespace detail

/// Sharp-cutoff approximate functional equation for F^(m)(s):
///   sum_{n<=y1} a(n)(-log n)^m n^-s
///   + sum_r (-1)^r C(m,r) chi^{(m-r)}(s) sum_{n<=y2} conj(a(n))(-log n)^r n^{s-1},
/// with y1 y2 = C_F |t|^{d_F} and the calibrated two-term error budget.
inline AfeResult afe_sharp(const SelbergDatum& datum, cplx s, int m, double y_split = 1.0,
                           const Calibration& cal = Calibration::defaults()) {
    detail::afe_preconditions(datum, s, m);
    if (!(y_split > 0.0)) throw argument_error("afe_sharp: y split ratio must be positive");
    auto dc = derived_constants(datum);
    double at = std::abs(s.imag());
    double y_base = std::sqrt(dc.C_F) * std::pow(at, 0.5 * dc.d_F);
    double y1 = y_base * y_split, y2 = y_base / y_split;

    AfeResult res;
    res.mode = afe_mode::sharp;
    res.y1 = y1;
    res.y2 = y2;

    long n1 = (long)std::floor(y1 + 1e-12);
    long n2 = (long)std::floor(y2 + 1e-12);
    auto coeff = datum.coeffs->prefix((int)std::max<long>({n1, n2, 1}));
    detail::term_tracker tracker;

    kahan_sum first;
    for (long n = 1; n <= n1; ++n) {
        double logn = std::log((double)n);
        cplx term = (*coeff)[(std::size_t)n] * pow_int(-logn, m) * std::exp(-s * logn);
        first.add(term);
        tracker.observe(n, std::abs(term));
    }
    res.main_sum_1 = first.value();

    cplx second = 0.0;
    cplx sm1 = s - 1.0; // n^{-(1-s)} = n^{s-1}
    for (int r = 0; r <= m; ++r) {
        kahan_sum inner;
        for (long n = 1; n <= n2; ++n) {
            double logn = std::log((double)n);
            cplx term = std::conj((*coeff)[(std::size_t)n]) * pow_int(-logn, r) *
                        std::exp(sm1 * logn);
            inner.add(term);
            if (r == m) tracker.observe(-n, std::abs(term));
        }
        double sign = (r % 2) ? -1.0 : 1.0;
        second += sign * binomial(m, r) * chi_derivative(datum, s, m - r) * inner.value();
    }
    res.main_sum_2 = second;
    res.value = res.main_sum_1 + second;
    res.diagnostics = tracker.top;

    auto bc = cal.for_datum(datum.label);
    const double eps = 0.05;
    res.error_estimate =
        bc.sharp_c * (std::pow(y1, 1.0 - s.real() + eps) / std::sqrt(at) +
                      std::pow(y2, s.real() + eps) *
                          std::pow(at, dc.d_F * (0.5 - s.real()) - 0.5));
    return res;
}

/// Smoothed approximate functional equation (the characteristic-function
/// form): phi-weighted main sums to 2y plus the explicit j >= 1 correction
/// masses carried by the contour coefficients.  Requires l > M_F(m).
inline AfeResult afe_smoothed(const SelbergDatum& datum, cplx s, int m,
                              const SmoothingFunction& phi, int l = -1, double y_split = 1.0,
                              const Calibration& cal = Calibration::defaults()) {
    detail::afe_preconditions(datum, s, m);
    if (!(y_split > 0.0)) throw argument_error("afe_smoothed: y split ratio must be positive");
    if (phi.is_sharp())
        throw smoothness_error("afe_smoothed: smooth cutoff required (xi rejected)");
    auto dc = derived_constants(datum);
    double mf = dc.M_F(m, datum.pole_order, datum.q());
    if (l < 0) l = (int)std::floor(mf) + 1;
    if (l > 12)
        throw capacity_error("afe_smoothed: l capped at 12 but M_F = " + std::to_string(mf) +
                                 " requires more",
                             mf);
    if (!(double(l) > mf))
        throw hypothesis_error("afe_smoothed: l must exceed M_F = " + std::to_string(mf), mf);

    double at = std::abs(s.imag());
    double y_base = std::sqrt(dc.C_F) * std::pow(at, 0.5 * dc.d_F);
    double y1 = y_base * y_split, y2 = y_base / y_split;

    auto phi0 = phi.dual();
    auto gamma_tab = gamma_delta_table(datum, s, m, l, 0, coeff_variant::gamma);
    auto delta_tab = gamma_delta_table(datum, 1.0 - s, m, l, m, coeff_variant::delta);

    AfeResult res;
    res.mode = afe_mode::smoothed;
    res.y1 = y1;
    res.y2 = y2;

    long n1 = (long)std::floor(2.0 * y1 + 1e-12);
    long n2 = (long)std::floor(2.0 * y2 + 1e-12);
    auto coeff = datum.coeffs->prefix((int)std::max<long>({n1, n2, 1}));
    detail::term_tracker tracker;

    kahan_sum first_main, first_corr;
    for (long n = 1; n <= n1; ++n) {
        double logn = std::log((double)n);
        double rho = double(n) / y1;
        cplx base = (*coeff)[(std::size_t)n] * pow_int(-logn, m) * std::exp(-s * logn);
        cplx main = base * phi.eval(0, rho); // j = 0 coefficient is the exact residue 1
        first_main.add(main);
        tracker.observe(n, std::abs(main));
        kahan_sum jsum;
        for (int j = 1; j <= l; ++j) {
            double w = phi.eval(j, rho);
            if (w == 0.0) continue;
            jsum.add(w * pow_int(-rho, j) * gamma_tab.at(j, 0));
        }
        first_corr.add(base * jsum.value());
    }
    res.main_sum_1 = first_main.value();

    cplx chi = chi_exact(datum, s);
    cplx second_main = 0.0, second_corr = 0.0;
    cplx sm1 = s - 1.0;
    for (int r = 0; r <= m; ++r) {
        // the j = 0 coefficient delta_0^{(m-r)}(1-s) is (chi^{(m-r)}/chi)(s)
        cplx delta0 = chi_log_ratio(datum, s, m - r);
        kahan_sum inner_main, inner_corr;
        for (long n = 1; n <= n2; ++n) {
            double logn = std::log((double)n);
            double rho = double(n) / y2;
            cplx base = std::conj((*coeff)[(std::size_t)n]) * pow_int(-logn, r) *
                        std::exp(sm1 * logn);
            inner_main.add(base * phi0.eval(0, rho) * delta0);
            kahan_sum jsum;
            for (int j = 1; j <= l; ++j) {
                double w = phi0.eval(j, rho);
                if (w == 0.0) continue;
                jsum.add(w * pow_int(-rho, j) * delta_tab.at(j, m - r));
            }
            inner_corr.add(base * jsum.value());
        }
        double sign = (r % 2) ? -1.0 : 1.0;
        second_main += sign * binomial(m, r) * inner_main.value();
        second_corr += sign * binomial(m, r) * inner_corr.value();
    }
    res.main_sum_2 = chi * second_main;
    res.correction = first_corr.value() + chi * second_corr;
    res.value = res.main_sum_1 + res.main_sum_2 + res.correction;
    res.diagnostics = tracker.top;

    auto bc = cal.for_datum(datum.label);
    int pole_pow = std::max(datum.pole_order - 1, 0);
    double log_sum = 0.0;
    for (int r = 0; r <= m; ++r)
        log_sum += pow_int(detail::log_plus(y2), r + pole_pow) *
                   pow_int(std::log(at), m - r);
    res.error_estimate =
        bc.smoothed_c *
        (std::pow(y1, 1.0 - s.real()) * pow_int(detail::log_plus(y1), m + pole_pow) *
             std::pow(at, -0.5 * l) * phi.l1_norm(l + 1) +
         std::pow(y2, s.real()) * std::pow(at, dc.d_F * (0.5 - s.real()) - 0.5 * l) *
             phi0.l1_norm(l + 1) * log_sum);
    return res;
}

/// Reflection identity: F^(m)(s) from supplied values of the bar function's
/// derivatives at 1-s.
inline cplx reflect_fdfe(const SelbergDatum& datum, cplx s, int m,
                         const std::vector<cplx>& values_at_reflection) {
    if ((int)values_at_reflection.size() != m + 1)
        throw argument_error("reflect_fdfe: need exactly m+1 reflected values");
    kahan_sum acc;
    for (int r = 0; r <= m; ++r) {
        double sign = (r % 2) ? -1.0 : 1.0;
        acc.add(sign * binomial(m, r) * chi_derivative(datum, s, m - r) *
                values_at_reflection[(std::size_t)r]);
    }
    return acc.value();
}

} // namespace selberg
