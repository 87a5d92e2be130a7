#include <chrono>
#include <cstdio>

#include "fcl/scenario.hpp"

int main() {
  const auto t0 = std::chrono::steady_clock::now();
  int failed = 0;
  for (const auto& c : fcl::run_acceptance()) {
    std::printf("criterion %2d %s  %s | %s\n", c.number, c.pass ? "PASS" : "FAIL", c.name.c_str(), c.detail.c_str());
    failed += c.pass ? 0 : 1;
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::printf("%d of 12 criteria failed (%.1f s)\n", failed, secs);
  return failed == 0 ? 0 : 1;
}
