#include "doctest.h"

#include <stdexcept>

#include "pcmwall/verify.hpp"

using namespace pcmwall;

TEST_CASE("the report lists its checks in a stable order") {
    const std::vector<CheckInfo> checks = verify_checks();
    REQUIRE(checks.size() == 9);
    const char* expected[] = {
        "sinusoid-fidelity",        "periodic-oracle",
        "stefan-front",             "energy-conservation",
        "calibrated-metrics",       "incomplete-crystallization",
        "hotplate-plateau",         "determinism-roundtrip",
        "convergence-orders",
    };
    for (size_t i = 0; i < checks.size(); ++i) {
        CHECK(checks[i].id == expected[i]);
        CHECK(!checks[i].description.empty());
    }
}

TEST_CASE("a single check can be selected by id") {
    VerifyOptions opt;
    opt.only = "sinusoid-fidelity";
    const std::vector<CheckResult> results = run_verification(opt);
    REQUIRE(results.size() == 1);
    CHECK(results[0].id == "sinusoid-fidelity");
    CHECK(results[0].passed);
    CHECK(!results[0].detail.empty());

    opt.only = "no-such-check";
    CHECK_THROWS_AS(run_verification(opt), std::invalid_argument);
}

TEST_CASE("a skewed fixture makes the oracle comparison fail") {
    // Self-test of the verification harness: bias the numeric side's
    // conductivity by 10% and the closed-form comparison must detect it.
    VerifyOptions opt;
    opt.only = "periodic-oracle";
    opt.oracle_perturbation = 0.1;
    const std::vector<CheckResult> results = run_verification(opt);
    REQUIRE(results.size() == 1);
    CHECK(!results[0].passed);
    CHECK(results[0].detail.find("FAIL") != std::string::npos);
}
