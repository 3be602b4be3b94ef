#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "resolvex/estimator.hpp"
#include "resolvex/rng.hpp"

namespace resolvex {

struct VerifyRow {
    std::string case_id;
    std::string quantity;
    double measured = 0.0;
    double bound = 0.0;
    bool pass = false;  // verification is measured <= bound (or named equality)
    std::string note;
};

struct SuiteResult {
    std::string suite;
    std::vector<VerifyRow> rows;
    std::uint64_t checks = 0;      // individual assertions evaluated
    std::uint64_t violations = 0;  // assertions that failed
    double wall_ms = 0.0;
    bool passed() const { return violations == 0; }
};

// Suites: qeue-lemmas, qere-lemmas, solver-oracle, kreiss, qeue-endtoend,
// qere-endtoend, propagation, normalized-error, params, conformance, radial.
std::vector<std::string> suite_names();
SuiteResult run_suite(const std::string& name, int trials, std::uint64_t seed);

void write_csv(const SuiteResult& result, std::ostream& os);

// Shared random Jordan specs for the verification protocols.
JordanSpec random_spec(Problem p, SequentialRng& rng, std::size_t max_dim, int max_d,
                       double max_cond);

} // namespace resolvex
