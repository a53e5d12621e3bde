#pragma once

#include <stdexcept>
#include <string>

namespace selberg {

// Error taxonomy used across the library.  Every failure carries a kind so
// the CLI can map it to an exit code and a machine-readable object.
enum class error_kind {
    validation,   // bad descriptor / datum field
    domain,       // input outside an operation's mathematical domain (poles etc.)
    argument,     // malformed call (wrong list length, bad range)
    capacity,     // documented capacity limit hit (m, l, r caps, series length)
    accuracy,     // requested tolerance not reachable
    smoothness,   // sharp cutoff passed where a smooth function is required
    hypothesis,   // theorem hypothesis violated (sigma range, l <= M_F, |t| small)
    contour,      // quadrature path degenerate (pole too close to the path)
    io            // file system / parse failures
};

inline const char* to_string(error_kind k) {
    switch (k) {
        case error_kind::validation: return "validation";
        case error_kind::domain: return "domain";
        case error_kind::argument: return "argument";
        case error_kind::capacity: return "capacity";
        case error_kind::accuracy: return "accuracy";
        case error_kind::smoothness: return "smoothness";
        case error_kind::hypothesis: return "hypothesis";
        case error_kind::contour: return "contour";
        case error_kind::io: return "io";
    }
    return "unknown";
}

class error : public std::runtime_error {
public:
    error(error_kind kind, std::string message)
        : std::runtime_error(std::move(message)), kind_(kind) {}
    error_kind kind() const noexcept { return kind_; }

private:
    error_kind kind_;
};

/// Descriptor/datum field failed its invariant; names the field.
class validation_error : public error {
public:
    validation_error(std::string field, const std::string& message)
        : error(error_kind::validation, message), field_(std::move(field)) {}
    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

/// Evaluation outside the mathematical domain.  `pole` carries the integer a
/// Gamma-type argument collided with when that is the cause (0 otherwise).
class domain_error : public error {
public:
    explicit domain_error(const std::string& message, long pole = 0, int factor_index = -1)
        : error(error_kind::domain, message), pole_(pole), factor_(factor_index) {}
    long pole() const noexcept { return pole_; }
    int factor_index() const noexcept { return factor_; }

private:
    long pole_;
    int factor_;
};

class argument_error : public error {
public:
    explicit argument_error(const std::string& message) : error(error_kind::argument, message) {}
};

/// Capacity limit; `achieved` reports how far the computation got (e.g. the
/// tail bound reached when max_terms ran out, or the required table length).
class capacity_error : public error {
public:
    explicit capacity_error(const std::string& message, double achieved = 0.0)
        : error(error_kind::capacity, message), achieved_(achieved) {}
    double achieved() const noexcept { return achieved_; }

private:
    double achieved_;
};

class accuracy_error : public error {
public:
    explicit accuracy_error(const std::string& message, double achieved = 0.0)
        : error(error_kind::accuracy, message), achieved_(achieved) {}
    double achieved() const noexcept { return achieved_; }

private:
    double achieved_;
};

class smoothness_error : public error {
public:
    explicit smoothness_error(const std::string& message) : error(error_kind::smoothness, message) {}
};

/// Theorem hypothesis violated; for the smoothed equation carries the M_F
/// threshold the caller's l failed to clear.
class hypothesis_error : public error {
public:
    explicit hypothesis_error(const std::string& message, double threshold = 0.0)
        : error(error_kind::hypothesis, message), threshold_(threshold) {}
    double threshold() const noexcept { return threshold_; }

private:
    double threshold_;
};

class contour_error : public error {
public:
    explicit contour_error(const std::string& message) : error(error_kind::contour, message) {}
};

class io_error : public error {
public:
    explicit io_error(const std::string& message) : error(error_kind::io, message) {}
};

} // namespace selberg
