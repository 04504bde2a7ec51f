#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tdiff/model.hpp"

namespace tdiff {

struct CriterionResult {
    std::string id;
    std::string title;
    bool passed = true;
    // Deterministic lines: measured errors and tolerances, never timings.
    std::vector<std::string> details;
    double seconds = 0.0;
    double budget_seconds = 0.0;
};

struct VerifyOptions {
    // Full-size Monte Carlo (1e5 paths, dt = 1e-4); otherwise a reduced run.
    bool full = false;
    std::uint64_t seed = 0x5EED2024;
    unsigned threads = 0;
    // Extra checks on a user model, reported after the fixed criteria.
    std::optional<ThresholdModel> model;
    // Skip the Monte Carlo criterion entirely.
    bool skip_monte_carlo = false;
};

std::vector<CriterionResult> run_verification(const VerifyOptions& options);

// Report without timings, byte-identical across runs with equal options.
std::string format_report(const std::vector<CriterionResult>& results);

}  // namespace tdiff
