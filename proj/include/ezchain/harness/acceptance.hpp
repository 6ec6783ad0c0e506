// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

namespace ezchain::harness {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
};

struct AcceptanceOptions {
    std::uint64_t adversarial_seeds = 200;
    std::uint64_t oracle_seeds = 50;
    std::vector<int> only;                 // empty: all eleven
    std::filesystem::path artifacts;       // CSVs of the long runs, if set
    std::function<void(const CriterionResult&)> on_result;
};

/// Runs the acceptance suite. Criterion 5 audits every simulation the other
/// criteria ran, so it is reported last.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opts);

/// "PASS  3  double-spend soundness: ..."
std::string format_result(const CriterionResult& r);

}  // namespace ezchain::harness
