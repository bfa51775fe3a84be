// Acceptance gate: runs the full verification suite and prints one verdict
// line per criterion. Exit status is the number of failed criteria.
#include <cstdio>

#include "pcmwall/verify.hpp"

int main() {
    const std::vector<pcmwall::CheckResult> results = pcmwall::run_verification();
    int failed = 0;
    int index = 0;
    for (const pcmwall::CheckResult& r : results) {
        ++index;
        std::printf("criterion %d %s %s — %s\n", index, r.passed ? "PASS" : "FAIL",
                    r.id.c_str(), r.detail.c_str());
        if (!r.passed) ++failed;
    }
    std::printf("%d of %d criteria passed\n", index - failed, index);
    return failed;
}
