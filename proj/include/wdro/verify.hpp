#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace wdro::verify {

/// One property checked over seeded random instances. `worst_violation` is
/// the largest observed violation (0 when every instance satisfied the
/// property with slack).
struct PropertyResult {
    std::string name;
    std::size_t trials = 0;
    std::size_t failures = 0;
    double worst_violation = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

struct SuiteReport {
    std::string suite;
    std::vector<PropertyResult> properties;

    bool pass() const;
    const PropertyResult* find(const std::string& name) const;
};

std::vector<std::string> suite_names();

/// Runs the named property suite ("transport", "concentration", "lipschitz",
/// "worstcase", "training") with seeded instances.
SuiteReport run_suite(const std::string& suite, std::uint64_t seed, std::size_t trials);

SuiteReport transport_suite(std::uint64_t seed, std::size_t trials);
SuiteReport concentration_suite(std::uint64_t seed, std::size_t trials);
SuiteReport lipschitz_suite(std::uint64_t seed, std::size_t trials);
SuiteReport worstcase_suite(std::uint64_t seed, std::size_t trials);
SuiteReport training_suite(std::uint64_t seed, std::size_t trials);

/// Central finite-difference check of every loss gradient; returns the worst
/// relative error over `trials` instances per model family, skipping the
/// absolute-loss kink neighbourhood.
double gradient_check_worst_error(std::uint64_t seed, std::size_t trials);

void print_report(const SuiteReport& report, std::ostream& out);

}  // namespace wdro::verify
