#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace appmin::validation {

struct CheckResult {
    std::string name;
    bool passed = false;
    double max_error = 0.0;  // largest observed deviation for this check
    double tolerance = 0.0;
    std::string detail;
};

struct Report {
    std::vector<CheckResult> checks;
    bool all_passed() const;
};

struct Options {
    // Flip the sign of the exponential factor in the Gaussian integral closed form to
    // prove the check can fail.
    bool inject_integral_sign_fault = false;
    std::uint64_t seed = 20240501;
};

// Individual suites. Each returns one result and never throws; an
// exception inside a check is reported as a failure of that check.
CheckResult check_gaussian_integrals(const Options& options = {});
CheckResult check_asymptotic_ratio(const Options& options = {});
CheckResult check_mk_envelope(const Options& options = {});
CheckResult check_rho_lambda(const Options& options = {});

Report validate(const Options& options = {});

void print_report(const Report& report, std::ostream& out);

}  // namespace appmin::validation
