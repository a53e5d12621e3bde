#pragma once

#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "selberg/datum.hpp"

namespace selberg {

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

inline double parse_real(const std::string& text, const std::string& field) {
    try {
        std::size_t used = 0;
        double v = std::stod(text, &used);
        if (trim(text.substr(used)).empty()) return v;
    } catch (...) {
    }
    throw validation_error(field, "could not parse number '" + text + "' for field " + field);
}

/// Splits a bracketed list "[a, b, c]" at top level (nested brackets kept).
inline std::vector<std::string> parse_list(const std::string& text, const std::string& field) {
    std::string t = trim(text);
    if (t.size() < 2 || t.front() != '[' || t.back() != ']')
        throw validation_error(field, "field " + field + " expects a bracketed list");
    std::vector<std::string> items;
    int depth = 0;
    std::string cur;
    for (std::size_t i = 1; i + 1 < t.size(); ++i) {
        char c = t[i];
        if (c == '[') ++depth;
        if (c == ']') --depth;
        if (c == ',' && depth == 0) {
            items.push_back(trim(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!trim(cur).empty()) items.push_back(trim(cur));
    return items;
}

inline cplx parse_complex_pair(const std::string& text, const std::string& field) {
    auto parts = parse_list(text, field);
    if (parts.size() != 2)
        throw validation_error(field, "field " + field + " expects [re, im] pairs");
    return {parse_real(parts[0], field), parse_real(parts[1], field)};
}

} // namespace detail

/// CSV coefficient table, rows "n,re,im" with n = 1..N contiguous.
inline std::vector<cplx> read_coefficient_table(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open coefficient table '" + path + "'");
    std::vector<cplx> table;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string t = detail::trim(line);
        if (t.empty() || t[0] == '#') continue;
        std::istringstream row(t);
        std::string ns, res, ims;
        if (!std::getline(row, ns, ',') || !std::getline(row, res, ',') || !std::getline(row, ims))
            throw io_error("coefficient table '" + path + "': malformed row at line " +
                           std::to_string(lineno));
        long n = std::lround(detail::parse_real(ns, "table.n"));
        if (n != (long)table.size() + 1)
            throw validation_error("coeffs", "coefficient table rows must be n = 1,2,... without gaps (line " +
                                                 std::to_string(lineno) + ")");
        table.emplace_back(detail::parse_real(res, "table.re"), detail::parse_real(ims, "table.im"));
    }
    if (table.empty()) throw validation_error("coeffs", "coefficient table '" + path + "' is empty");
    return table;
}

/// Parses the key/value descriptor document.  Unknown keys are rejected.
inline SelbergDatum parse_descriptor_text(std::istream& in, const std::string& origin) {
    SelbergDatum d;
    std::optional<int> declared_q;
    bool saw_label = false, saw_Q = false, saw_lambda = false, saw_mu = false, saw_omega = false,
         saw_pole = false, saw_coeffs = false;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string t = detail::trim(line);
        if (t.empty() || t[0] == '#') continue;
        auto eq = t.find('=');
        if (eq == std::string::npos)
            throw validation_error("descriptor", origin + ": line " + std::to_string(lineno) +
                                                     " is not 'key = value'");
        std::string key = detail::trim(t.substr(0, eq));
        std::string value = detail::trim(t.substr(eq + 1));
        if (key == "label") {
            d.label = value;
            saw_label = true;
        } else if (key == "q") {
            declared_q = (int)std::lround(detail::parse_real(value, "q"));
        } else if (key == "Q") {
            d.Q = detail::parse_real(value, "Q");
            saw_Q = true;
        } else if (key == "lambda") {
            for (const auto& item : detail::parse_list(value, "lambda"))
                d.lambdas.push_back(detail::parse_real(item, "lambda"));
            saw_lambda = true;
        } else if (key == "mu") {
            for (const auto& item : detail::parse_list(value, "mu"))
                d.mus.push_back(detail::parse_complex_pair(item, "mu"));
            saw_mu = true;
        } else if (key == "omega") {
            d.omega = detail::parse_complex_pair(value, "omega");
            saw_omega = true;
        } else if (key == "pole_order") {
            d.pole_order = (int)std::lround(detail::parse_real(value, "pole_order"));
            saw_pole = true;
        } else if (key == "coeffs") {
            if (value == "zeta")
                d.coeffs = CoefficientSource::make_zeta();
            else if (value == "delta")
                d.coeffs = CoefficientSource::make_delta();
            else if (value == "rankin_selberg")
                d.coeffs = CoefficientSource::make_rankin_selberg();
            else if (value.rfind("table:", 0) == 0)
                d.coeffs = CoefficientSource::make_table(read_coefficient_table(value.substr(6)));
            else
                throw validation_error("coeffs", "unknown coefficient source '" + value + "'");
            saw_coeffs = true;
        } else {
            throw validation_error(key, origin + ": unknown descriptor field '" + key + "'");
        }
    }
    if (!saw_label) throw validation_error("label", origin + ": missing field 'label'");
    if (!saw_Q) throw validation_error("Q", origin + ": missing field 'Q'");
    if (!saw_lambda) throw validation_error("lambda", origin + ": missing field 'lambda'");
    if (!saw_mu) throw validation_error("mu", origin + ": missing field 'mu'");
    if (!saw_omega) throw validation_error("omega", origin + ": missing field 'omega'");
    if (!saw_pole) throw validation_error("pole_order", origin + ": missing field 'pole_order'");
    if (!saw_coeffs) throw validation_error("coeffs", origin + ": missing field 'coeffs'");
    if (declared_q && *declared_q != d.q())
        throw validation_error("q", origin + ": declared q disagrees with lambda list length");
    d.validate();
    return d;
}

inline SelbergDatum parse_descriptor_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open descriptor '" + path + "'");
    return parse_descriptor_text(in, path);
}

/// Resolves a datum reference: built-in label or descriptor file path.
inline SelbergDatum resolve_datum(const std::string& ref) {
    if (ref == "zeta" || ref == "delta" || ref == "rankin_selberg_delta" || ref == "rankin_selberg")
        return builtin_datum(ref);
    return parse_descriptor_file(ref);
}

} // namespace selberg
