// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include <chrono>
#include <cstdio>
#include <string>
#include <sys/wait.h>

#include "besov_mhd/selftest.hpp"

using namespace besov_mhd::selftest;

namespace {

CriterionResult selftest_subprocess() {
    auto r = make_result(14, "selftest subcommand");
    const std::string cmd = std::string("\"") + BESOV_MHD_CLI_PATH + "\" selftest 2>&1";
    const auto start = std::chrono::steady_clock::now();
    std::FILE* pipe = ::popen(cmd.c_str(), "r");
    if (!pipe) {
        r.detail = "could not start " + cmd;
        return r;
    }
    std::string failed;
    char line[1024];
    while (std::fgets(line, sizeof line, pipe)) {
        std::printf("      | %s", line);
        if (std::string(line).rfind("[FAIL]", 0) == 0) failed += std::string(line).substr(7, 3);
    }
    const int status = ::pclose(pipe);
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.pass = code == 0 && r.seconds < 600.0;
    r.detail = detail::fmt("exit %d in %.1f s", code, r.seconds) + (failed.empty() ? "" : ", failing checks:" + failed);
    return r;
}

}  // namespace

int main() {
    auto results = run_checks({1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13});
    const auto last = selftest_subprocess();
    std::printf("[%s] %2d %s: %s\n", last.pass ? "PASS" : "FAIL", last.id, last.name.c_str(), last.detail.c_str());
    results.push_back(last);
    int failed = 0;
    for (const auto& r : results) failed += r.pass ? 0 : 1;
    std::printf("%zu/%zu criteria passed\n", results.size() - failed, results.size());
    return failed == 0 ? 0 : 1;
}
