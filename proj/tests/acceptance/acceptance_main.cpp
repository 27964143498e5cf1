// One line per acceptance criterion. All comparisons are exact; the whole run
// has a 60 s budget and criterion 1 a 5 s budget.

#include <chrono>
#include <cstdio>

#include "exsplit/acceptance.hpp"

int main(int argc, char** argv) {
  const std::string jobs_dir = argc > 1 ? argv[1] : EXSPLIT_JOBS_DIR;
  const auto start = std::chrono::steady_clock::now();
  const auto results = exsplit::acceptance::run_all({jobs_dir});
  const double total = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  bool ok = true;
  for (const auto& r : results) {
    std::printf("criterion %d: %s  %s [tolerance 0 (exact); %s; %.2f s]\n", r.id, r.passed ? "PASS" : "FAIL",
                r.name.c_str(), r.detail.c_str(), r.seconds);
    ok = ok && r.passed;
  }
  const bool in_budget = total < 60.0;
  std::printf("runtime: %s  %.2f s [budget 60 s]\n", in_budget ? "PASS" : "FAIL", total);
  return ok && in_budget ? 0 : 1;
}
