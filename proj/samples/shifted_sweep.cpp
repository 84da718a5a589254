// Sweeps tau for a pendulum with an off-grid maximiser and prints how far
// the discrete Aubry and Mather sets sit from the continuous ones.

#include <cstdio>

#include "weakkam/all.hpp"

using namespace weakkam;

int main() {
  SweepPlan plan;
  plan.model = models::pendulum(1.0, 0.3183098861837907);
  plan.taus = {0.2, 0.1, 0.05, 0.025};
  plan.reference = mechanical_reference(plan.model);
  const auto report = tau_sweep(plan);
  std::printf("%8s %6s %12s %12s %12s\n", "tau", "N", "bar_L", "e(A->ref)", "e(M->ref)");
  for (const auto& r : report.rows) {
    if (!r.ok()) {
      std::printf("%8g failed: %s\n", r.tau, r.error.c_str());
      continue;
    }
    std::printf("%8g %6d %12.8f %12.4g %12.4g\n", r.tau, r.N, r.bar_L, r.e_aubry_to_ref, r.e_mather_to_ref);
  }
  const auto k = kuratowski_report(report);
  for (const auto& e : k.entries)
    std::printf("%-14s monotone=%d slope=%.2f trending=%d\n", e.name.c_str(), e.monotone, e.slope, e.trending_to_zero);
  return 0;
}
