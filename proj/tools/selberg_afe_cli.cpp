// Command line surface for the Selberg-class AFE engine: evaluate F^(m)(s),
// inspect chi factors, run the verification suites, scan error scaling, and
// dump Dirichlet coefficients.  Errors leave as single-line JSON objects on
// stderr with exit codes 2 (usage/domain), 3 (I/O); verification failures
// exit 1.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <random>
#include <thread>

#include "selberg/afe.hpp"
#include "selberg/descriptor.hpp"
#include "selberg/oracle.hpp"
#include "selberg/report.hpp"
#include "selberg/smoothing.hpp"

using namespace selberg;
using nlohmann::json;

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// "a" or "a:b:n" -> n values from a to b inclusive
std::vector<double> parse_grid(const std::string& text, const std::string& name) {
    std::vector<double> out;
    auto c1 = text.find(':');
    if (c1 == std::string::npos) {
        out.push_back(std::stod(text));
        return out;
    }
    auto c2 = text.find(':', c1 + 1);
    if (c2 == std::string::npos)
        throw argument_error(name + ": grid spec must be 'a' or 'a:b:n'");
    double a = std::stod(text.substr(0, c1));
    double b = std::stod(text.substr(c1 + 1, c2 - c1 - 1));
    int n = std::stoi(text.substr(c2 + 1));
    if (n < 1) throw argument_error(name + ": grid count must be >= 1");
    for (int i = 0; i < n; ++i)
        out.push_back(n == 1 ? a : a + (b - a) * i / double(n - 1));
    return out;
}

int thread_count() {
    const char* env = std::getenv("SELBERG_AFE_THREADS");
    if (!env) return 1;
    int n = std::atoi(env);
    return std::max(1, std::min(n, 64));
}

/// Index-deterministic parallel map: results land by index, so the output is
/// byte-identical for any worker count.
template <typename Fn>
void parallel_for(std::size_t count, Fn&& fn) {
    int workers = thread_count();
    if (workers <= 1 || count < 2) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) fn(i);
        });
    for (auto& th : pool) th.join();
}

struct EvalRow {
    double sigma, t;
    int m;
    std::string mode;
    AfeResult res;
};

void emit_eval_rows(const std::vector<EvalRow>& rows, const std::string& label,
                    const std::string& format, std::ostream& out) {
    if (format == "csv") {
        out << "label,sigma,t,m,mode,value_re,value_im,main1_re,main1_im,main2_re,main2_im,"
               "correction_re,correction_im,error_estimate,y1,y2\n";
        for (const auto& r : rows) {
            out << label << ',' << fmt(r.sigma) << ',' << fmt(r.t) << ',' << r.m << ',' << r.mode
                << ',' << fmt(r.res.value.real()) << ',' << fmt(r.res.value.imag()) << ','
                << fmt(r.res.main_sum_1.real()) << ',' << fmt(r.res.main_sum_1.imag()) << ','
                << fmt(r.res.main_sum_2.real()) << ',' << fmt(r.res.main_sum_2.imag()) << ','
                << fmt(r.res.correction.real()) << ',' << fmt(r.res.correction.imag()) << ','
                << fmt(r.res.error_estimate) << ',' << fmt(r.res.y1) << ',' << fmt(r.res.y2)
                << '\n';
        }
    } else {
        json arr = json::array();
        for (const auto& r : rows) {
            arr.push_back({{"label", label},
                           {"sigma", r.sigma},
                           {"t", r.t},
                           {"m", r.m},
                           {"mode", r.mode},
                           {"value_re", r.res.value.real()},
                           {"value_im", r.res.value.imag()},
                           {"main1_re", r.res.main_sum_1.real()},
                           {"main1_im", r.res.main_sum_1.imag()},
                           {"main2_re", r.res.main_sum_2.real()},
                           {"main2_im", r.res.main_sum_2.imag()},
                           {"correction_re", r.res.correction.real()},
                           {"correction_im", r.res.correction.imag()},
                           {"error_estimate", r.res.error_estimate},
                           {"y1", r.res.y1},
                           {"y2", r.res.y2}});
        }
        out << arr.dump() << '\n';
    }
}

std::ostream& open_output(const std::string& path, std::ofstream& file) {
    if (path.empty()) return std::cout;
    file.open(path);
    if (!file) throw io_error("cannot open output file '" + path + "'");
    return file;
}

Calibration load_calibration(const std::string& path) {
    if (path.empty()) return Calibration::defaults();
    std::ifstream in(path);
    if (!in) throw io_error("cannot open calibration file '" + path + "'");
    json doc = json::parse(in, nullptr, false);
    if (doc.is_discarded() || !doc.contains("constants"))
        throw io_error("calibration file '" + path + "' is not valid");
    Calibration cal;
    for (auto& [label, entry] : doc["constants"].items())
        cal.set(label, {entry["sharp_c"].get<double>(), entry["smoothed_c"].get<double>()});
    return cal;
}

void save_calibration(const Calibration& cal, const std::string& path) {
    json doc;
    doc["generated_by"] = "selberg-afe verify --calibrate";
    doc["margin"] = 1.25;
    json constants;
    for (const auto& [label, bc] : cal.table())
        constants[label] = {{"sharp_c", bc.sharp_c}, {"smoothed_c", bc.smoothed_c}};
    doc["constants"] = constants;
    std::ofstream out(path);
    if (!out) throw io_error("cannot write calibration file '" + path + "'");
    out << doc.dump(2) << '\n';
}

int cmd_eval(const std::string& datum_ref, const std::string& sigma_spec,
             const std::string& t_spec, int m, const std::string& mode, double alpha, int l,
             double split, const std::string& format, const std::string& out_path,
             const std::string& cal_path) {
    auto datum = resolve_datum(datum_ref);
    auto cal = load_calibration(cal_path);
    auto sigmas = parse_grid(sigma_spec, "sigma");
    auto ts = parse_grid(t_spec, "t");

    std::vector<EvalRow> rows(sigmas.size() * ts.size());
    std::vector<std::exception_ptr> errors(rows.size());
    parallel_for(rows.size(), [&](std::size_t i) {
        double sigma = sigmas[i / ts.size()];
        double t = ts[i % ts.size()];
        try {
            cplx s(sigma, t);
            AfeResult res;
            if (mode == "sharp") {
                res = afe_sharp(datum, s, m, split, cal);
            } else if (mode == "smoothed") {
                SmoothingFunction phi = base_bump();
                if (alpha > 0.0) phi = make_phi_alpha(phi, alpha, t);
                res = afe_smoothed(datum, s, m, phi, l, split, cal);
            } else {
                throw argument_error("mode must be sharp or smoothed");
            }
            rows[i] = EvalRow{sigma, t, m, mode, res};
        } catch (...) {
            errors[i] = std::current_exception();
        }
    });
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);

    std::ofstream file;
    auto& out = open_output(out_path, file);
    emit_eval_rows(rows, datum.label, format, out);
    return 0;
}

int cmd_chi(const std::string& datum_ref, const std::string& sigma_spec,
            const std::string& t_spec, int m, const std::string& format,
            const std::string& out_path) {
    auto datum = resolve_datum(datum_ref);
    auto sigmas = parse_grid(sigma_spec, "sigma");
    auto ts = parse_grid(t_spec, "t");
    std::ofstream file;
    auto& out = open_output(out_path, file);
    json arr = json::array();
    if (format == "csv")
        out << "label,sigma,t,r,chi_re,chi_im,asym_modulus,asym_phase,asym_rel_gap,budget\n";
    for (double sigma : sigmas) {
        for (double t : ts) {
            cplx s(sigma, t);
            auto asym = chi_asymptotic(datum, s);
            for (int r = 0; r <= m; ++r) {
                cplx chi_r = chi_derivative(datum, s, r);
                double gap =
                    (r == 0) ? std::abs(asym.value() / chi_r - 1.0) : 0.0;
                if (format == "csv") {
                    out << datum.label << ',' << fmt(sigma) << ',' << fmt(t) << ',' << r << ','
                        << fmt(chi_r.real()) << ',' << fmt(chi_r.imag()) << ','
                        << fmt(asym.modulus) << ',' << fmt(asym.phase) << ',' << fmt(gap) << ','
                        << fmt(asym.rel_error_budget) << '\n';
                } else {
                    arr.push_back({{"label", datum.label},
                                   {"sigma", sigma},
                                   {"t", t},
                                   {"r", r},
                                   {"chi_re", chi_r.real()},
                                   {"chi_im", chi_r.imag()},
                                   {"asym_modulus", asym.modulus},
                                   {"asym_phase", asym.phase},
                                   {"asym_rel_gap", gap},
                                   {"budget", asym.rel_error_budget}});
                }
            }
        }
    }
    if (format != "csv") out << arr.dump() << '\n';
    return 0;
}

int cmd_verify(const std::string& datum_ref, const std::string& out_path, std::uint64_t seed,
               bool calibrate, bool corrupt_chi, const std::string& cal_path,
               const std::string& cal_out) {
    auto datum = resolve_datum(datum_ref);
    Calibration cal = load_calibration(cal_path);
    if (calibrate) {
        for (const auto& d : {zeta_datum(), delta_datum(), rankin_selberg_delta_datum()})
            cal.set(d.label, calibrate_datum(d));
        if (!cal_out.empty()) save_calibration(cal, cal_out);
    }
    GridSpec grid;
    grid.seed = seed;
    grid.corrupt_chi = corrupt_chi;
    auto rows = residual_suite(datum, grid, -1, cal);
    // seeded random reflection spot checks, reproducible per seed
    {
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> sig(0.05, 0.95), tt(20.0, 150.0);
        for (int i = 0; i < 5; ++i) {
            cplx s(sig(rng), tt(rng));
            auto row = fdfe_row(datum, s, 0, cal, corrupt_chi);
            row.mode = "fdfe_rand";
            rows.push_back(row);
        }
    }
    std::ofstream file;
    auto& out = open_output(out_path, file);
    out << report_to_csv(rows);
    bool all_pass = true;
    for (const auto& r : rows) all_pass = all_pass && r.pass;
    return all_pass ? 0 : 1;
}

int cmd_scan(const std::string& datum_ref, const std::string& sigma_spec,
             const std::string& t_spec, int m, const std::string& out_path,
             const std::string& cal_path) {
    auto datum = resolve_datum(datum_ref);
    auto cal = load_calibration(cal_path);
    auto sigmas = parse_grid(sigma_spec, "sigma");
    auto ts = parse_grid(t_spec, "t");
    if (ts.size() < 4) throw argument_error("scan: need at least 4 t points for a slope fit");
    const bool has_oracle = datum.coeffs->kind() == coefficient_kind::zeta;
    std::ofstream file;
    auto& out = open_output(out_path, file);
    out << "label,sigma,t,m,mode,residual,budget,slope\n";
    for (double sigma : sigmas) {
        std::vector<std::pair<double, double>> pts;
        std::vector<std::string> lines;
        for (double t : ts) {
            cplx s(sigma, t);
            double residual, budget;
            if (has_oracle) {
                auto sharp = afe_sharp(datum, s, m, 1.0, cal);
                residual = std::abs(sharp.value - euler_maclaurin_zeta(s, m));
                budget = sharp.error_estimate;
            } else {
                auto row = fdfe_row(datum, s, m, cal);
                residual = row.residual;
                budget = row.budget;
            }
            pts.emplace_back(t, residual);
            lines.push_back(datum.label + ',' + fmt(sigma) + ',' + fmt(t) + ',' +
                            std::to_string(m) + (has_oracle ? ",oracle," : ",fdfe,") +
                            fmt(residual) + ',' + fmt(budget));
        }
        double slope = detail::fitted_slope(pts);
        for (const auto& line : lines) out << line << ',' << fmt(slope) << '\n';
    }
    return 0;
}

int cmd_coeffs(const std::string& datum_ref, int n_max, const std::string& out_path) {
    auto datum = resolve_datum(datum_ref);
    auto values = datum.coeffs->take(n_max);
    std::ofstream file;
    auto& out = open_output(out_path, file);
    for (int n = 1; n <= n_max; ++n)
        out << n << ',' << fmt(values[(std::size_t)n - 1].real()) << ','
            << fmt(values[(std::size_t)n - 1].imag()) << '\n';
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Selberg-class L-function derivative evaluator (approximate functional equations)"};
    app.require_subcommand(1);

    std::string datum_ref = "zeta", sigma_spec = "0.5", t_spec = "100", mode = "sharp";
    std::string format = "csv", out_path, cal_path, cal_out = "data/calibration.json";
    int m = 0, l = -1, n_max = 10;
    double alpha = 0.0, split = 1.0;
    std::uint64_t seed = 12345;
    bool calibrate = false, corrupt_chi = false;

    auto* eval = app.add_subcommand("eval", "evaluate F^(m)(s) by the sharp or smoothed equation");
    eval->add_option("--datum", datum_ref, "built-in label or descriptor file");
    eval->add_option("--m", m, "derivative order (0..6)");
    eval->add_option("--sigma", sigma_spec, "sigma or sigma grid a:b:n");
    eval->add_option("--t", t_spec, "t or t grid a:b:n");
    eval->add_option("--mode", mode, "sharp | smoothed");
    eval->add_option("--alpha", alpha, "phi_alpha parameter (smoothed mode, 0 = plain bump)");
    eval->add_option("--l", l, "correction order (smoothed mode, default M_F + 1)");
    eval->add_option("--split", split, "y1/y2 split ratio kappa");
    eval->add_option("--output", format, "csv | json");
    eval->add_option("--out", out_path, "output file (default stdout)");
    eval->add_option("--calibration", cal_path, "calibration file override");

    auto* chi = app.add_subcommand("chi", "inspect chi_F and its derivatives");
    chi->add_option("--datum", datum_ref, "built-in label or descriptor file");
    chi->add_option("--m", m, "highest derivative order");
    chi->add_option("--sigma", sigma_spec, "sigma or grid");
    chi->add_option("--t", t_spec, "t or grid");
    chi->add_option("--output", format, "csv | json");
    chi->add_option("--out", out_path, "output file");

    auto* verify = app.add_subcommand("verify", "run the residual/identity suite");
    verify->add_option("--datum", datum_ref, "built-in label or descriptor file");
    verify->add_option("--out", out_path, "report file (default stdout)");
    verify->add_option("--seed", seed, "seed for the random spot checks");
    verify->add_flag("--calibrate", calibrate, "re-measure budget constants and save them");
    verify->add_flag("--corrupt-chi", corrupt_chi, "test hook: perturb chi in the reflection");
    verify->add_option("--calibration", cal_path, "calibration file to load");
    verify->add_option("--calibration-out", cal_out, "file written by --calibrate");

    auto* scan = app.add_subcommand("scan", "residual vs t table with fitted slopes");
    scan->add_option("--datum", datum_ref, "built-in label or descriptor file");
    scan->add_option("--m", m, "derivative order");
    scan->add_option("--sigma", sigma_spec, "sigma or grid");
    scan->add_option("--t", t_spec, "t grid a:b:n (>= 4 points)");
    scan->add_option("--out", out_path, "output file");
    scan->add_option("--calibration", cal_path, "calibration file override");

    auto* coeffs = app.add_subcommand("coeffs", "emit Dirichlet coefficients a_F(n)");
    coeffs->add_option("--datum", datum_ref, "built-in label or descriptor file");
    coeffs->add_option("--n", n_max, "number of coefficients");
    coeffs->add_option("--out", out_path, "output file");

    CLI11_PARSE(app, argc, argv);

    try {
        if (eval->parsed())
            return cmd_eval(datum_ref, sigma_spec, t_spec, m, mode, alpha, l, split, format,
                            out_path, cal_path);
        if (chi->parsed()) return cmd_chi(datum_ref, sigma_spec, t_spec, m, format, out_path);
        if (verify->parsed())
            return cmd_verify(datum_ref, out_path, seed, calibrate, corrupt_chi, cal_path,
                              cal_out);
        if (scan->parsed()) return cmd_scan(datum_ref, sigma_spec, t_spec, m, out_path, cal_path);
        if (coeffs->parsed()) return cmd_coeffs(datum_ref, n_max, out_path);
    } catch (const io_error& e) {
        std::cerr << json{{"error", {{"kind", "io"}, {"message", e.what()}}}}.dump() << '\n';
        return 3;
    } catch (const error& e) {
        std::cerr << json{{"error", {{"kind", to_string(e.kind())}, {"message", e.what()}}}}.dump()
                  << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << json{{"error", {{"kind", "internal"}, {"message", e.what()}}}}.dump() << '\n';
        return 2;
    }
    return 0;
}
