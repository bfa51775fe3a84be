#pragma once

#include <string>
#include <vector>

namespace pcmwall {

struct VerifyOptions {
    std::string presets_dir;          // empty: the built-in preset directory
    double oracle_perturbation = 0.0; // self-test knob: skews the slab fixture's
                                      // conductivity so the oracle check must fail
    std::string only;                 // non-empty: run a single check by id
};

struct CheckInfo {
    std::string id;
    std::string description;
};

struct CheckResult {
    std::string id;
    std::string description;
    bool passed = false;
    std::string detail; // the numbers behind the verdict, one line
};

// The checks in report order, without running anything.
std::vector<CheckInfo> verify_checks();

// Runs the verification suite (or the single selected check) and returns one
// result per check. A check that throws is reported as failed with the
// exception text in the detail line.
std::vector<CheckResult> run_verification(const VerifyOptions& options = {});

} // namespace pcmwall
