#pragma once

#include <map>
#include <string>

#include "selberg/errors.hpp"

namespace selberg {

/// Measured O-constants for the error budgets.  The theorem shapes carry
/// unspecified constants; these are calibrated once against the strip oracle
/// (zeta) and the reflection identity (the other built-ins), then frozen.
/// `verify --calibrate` regenerates the file form.
struct BudgetConstants {
    double sharp_c = 1.0;
    double smoothed_c = 1.0;
};

class Calibration {
public:
    /// Frozen defaults from the committed calibration run.
    static const Calibration& defaults() {
        static Calibration cal = [] {
            Calibration c;
            // values produced by `selberg-afe verify --calibrate`, margin 1.25:
            // zeta against the Euler-Maclaurin strip oracle, the cusp-form
            // data through the reflection identity and split invariance
            c.set("zeta", {7.636282499853255, 0.004909379747399087});
            c.set("delta", {3.649744582409054, 1.25});
            c.set("rankin_selberg_delta", {7.1401790120420685, 1.25});
            return c;
        }();
        return cal;
    }

    void set(const std::string& label, BudgetConstants bc) { table_[label] = bc; }

    BudgetConstants for_datum(const std::string& label) const {
        auto it = table_.find(label);
        if (it != table_.end()) return it->second;
        // unknown data fall back to the worst built-in with headroom
        BudgetConstants worst{0.0, 0.0};
        for (const auto& [k, v] : table_) {
            worst.sharp_c = std::max(worst.sharp_c, v.sharp_c);
            worst.smoothed_c = std::max(worst.smoothed_c, v.smoothed_c);
        }
        if (worst.sharp_c == 0.0) worst = BudgetConstants{};
        worst.sharp_c *= 2.0;
        worst.smoothed_c *= 2.0;
        return worst;
    }

    const std::map<std::string, BudgetConstants>& table() const { return table_; }

private:
    std::map<std::string, BudgetConstants> table_;
};

} // namespace selberg
