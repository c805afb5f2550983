#include <hyperheat/hyperheat.hpp>

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <set>
#include <vector>

int main(int argc, char** argv) {
    CLI::App app{"Acceptance criteria 1-12"};
    std::vector<int> expect_fail;
    app.add_option("--expect-fail", expect_fail, "criteria known to fail; they are still reported as FAIL");
    CLI11_PARSE(app, argc, argv);
    const std::set<int> known(expect_fail.begin(), expect_fail.end());

    const auto start = std::chrono::steady_clock::now();
    int unexpected = 0, failed = 0;
    for (const auto& r : hyperheat::run_acceptance()) {
        std::printf("%s %2d  %s: measured %.3e, tolerance %.1e; %s\n", r.passed ? "PASS" : "FAIL", r.id,
                    r.name.c_str(), r.measured, r.tolerance, r.detail.c_str());
        if (!r.passed) ++failed;
        if (r.passed == known.count(r.id) > 0) {
            ++unexpected;
            std::printf("     criterion %d: %s\n", r.id, r.passed ? "passed but listed as expected failure" : "unexpected failure");
        }
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%d of 12 passed, %d expected failure(s), %.1f s\n", 12 - failed, static_cast<int>(known.size()), secs);
    return unexpected == 0 ? 0 : 1;
}
