// Acceptance suite: runs every registered experiment and prints one
// pass/fail line per criterion. Exit code 0 iff everything passes.

#include <cstdio>
#include <cstdlib>

#include "fsic/experiments.hpp"

int main() {
  using namespace fsic;
  ExperimentContext ctx;
  const char* out = std::getenv("FSIC_OUT");
  ctx.out_dir = out ? out : "acceptance_artifacts";
  bool all_pass = true;
  for (const auto& entry : experiment_registry()) {
    RunReport rep;
    bool threw = false;
    std::string what;
    try {
      rep = run_experiment(entry.name, ctx);
    } catch (const std::exception& e) {
      threw = true;
      what = e.what();
    }
    const bool ok = !threw && rep.pass();
    all_pass = all_pass && ok;
    std::printf("[%s] %2d. %-26s (%.0f ms) %s\n", ok ? "PASS" : "FAIL", entry.criterion,
                entry.name.c_str(), rep.wall_ms, threw ? what.c_str() : "");
    if (!ok && !threw) {
      for (const auto& a : rep.assertions)
        if (!a.pass) std::printf("       failed: %s  %s\n", a.name.c_str(), a.detail.c_str());
    }
  }
  std::printf("%s\n", all_pass ? "acceptance: all criteria pass" : "acceptance: FAILURES");
  return all_pass ? 0 : 1;
}
