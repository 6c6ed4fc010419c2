// Runs every reproduction criterion and prints one PASS/FAIL line each.
// Exit status is nonzero when any criterion fails.

#include <cstdio>
#include <string>
#include <vector>

#include "dimerlab/acceptance.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> only(argv + 1, argv + argc);
  const auto results = dimerlab::acceptance::run(only, [](const dimerlab::acceptance::CriterionResult& r) {
    std::printf("%s criterion %d [%s] %s", r.passed ? "PASS" : "FAIL", r.id, r.group.c_str(), r.title.c_str());
    if (r.elapsed_s) std::printf(" (%.2fs)", *r.elapsed_s);
    std::printf("\n  %s\n", r.measured.dump().c_str());
    if (!r.note.empty()) std::printf("  note: %s\n", r.note.c_str());
    std::fflush(stdout);
  });
  int failed = 0;
  for (const auto& r : results) failed += r.passed ? 0 : 1;
  std::printf("%zu criteria, %d failed\n", results.size(), failed);
  return failed == 0 ? 0 : 1;
}
