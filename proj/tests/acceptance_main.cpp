// Acceptance battery runner: prints one PASS/FAIL line per criterion and
// exits 0 only when every criterion holds. Optional argv[1] points at a
// tolerance manifest JSON; otherwise the built-in version-1 set is used.

#include <cstdio>

#include "rru/acceptance.hpp"

int main(int argc, char** argv) {
  rru::ToleranceManifest tolerances;
  if (argc > 1) {
    try {
      tolerances = rru::load_tolerance_manifest(argv[1]);
    } catch (const std::exception& e) {
      std::fprintf(stderr, "error: %s\n", e.what());
      return 2;
    }
  }
  std::printf("acceptance battery, tolerance manifest version %s\n", tolerances.version.c_str());
  std::vector<rru::CriterionResult> results = rru::run_acceptance(tolerances);
  bool all_pass = true;
  for (const auto& r : results) {
    all_pass = all_pass && r.pass;
    std::printf("[%s] %2d %-32s %s\n", r.pass ? "PASS" : "FAIL", r.id, r.name.c_str(),
                r.detail.c_str());
  }
  std::printf("%s\n", all_pass ? "ALL CRITERIA PASS" : "SOME CRITERIA FAILED");
  return all_pass ? 0 : 1;
}
