// Acceptance gate: runs every verification criterion at its pinned tolerance
// and prints one pass/fail line each. Exits nonzero if any criterion fails.

#include "fredpair/acceptance.hpp"

#include <chrono>
#include <cstdio>

int main() {
    using clock = std::chrono::steady_clock;
    const auto t0 = clock::now();
    const auto results = fredpair::run_acceptance();
    int failures = 0;
    for (const auto& r : results) {
        if (!r.passed) ++failures;
        std::printf("[%s] criterion %d: %s (%s)\n", r.passed ? "PASS" : "FAIL", r.id,
                    r.name.c_str(), r.detail.c_str());
    }
    const auto ms =
        std::chrono::duration_cast<std::chrono::milliseconds>(clock::now() - t0).count();
    std::printf("%d/%zu criteria passed in %lld ms\n",
                static_cast<int>(results.size()) - failures, results.size(),
                static_cast<long long>(ms));
    return failures == 0 ? 0 : 1;
}
