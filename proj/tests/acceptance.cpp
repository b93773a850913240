// Runs every acceptance criterion once and prints one PASS/FAIL line each.
// Exit status is zero only when all of them pass.
#include <cstdio>

#include "hopfmcf/verify.hpp"

int main() {
  int failed = 0;
  hopfmcf::run_verification({}, [&](const hopfmcf::CriterionResult& r) {
    std::printf("%s  %2d %-18s %s  [expected: %s; tolerance: %s] (%.1f s)\n", r.pass ? "PASS" : "FAIL", r.id,
                r.name.c_str(), r.measured.c_str(), r.expected.c_str(), r.tolerance.c_str(), r.seconds);
    std::fflush(stdout);
    failed += !r.pass;
  });
  std::printf("%d of 10 criteria failed\n", failed);
  return failed == 0 ? 0 : 1;
}
