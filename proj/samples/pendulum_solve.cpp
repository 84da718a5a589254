// Solves the discrete weak KAM problem for the pendulum and prints the
// ergodic constant, the critical set and the Mather and Aubry sets.

#include <cstdio>

#include "weakkam/all.hpp"

using namespace weakkam;

int main() {
  const auto model = models::pendulum();
  const double tau = 0.05;
  const auto graph = build_edge_graph(build_grid(1, 128), model, tau, VelocityBound::user(3.0));
  const auto sol = solve_weak_kam(graph);
  std::printf("nodes=%d edges=%zu\n", graph.node_count(), graph.edge_count());
  std::printf("lambda=%.12g bar_L=%.12g residual=%.3g\n", sol.lambda, sol.bar_L, sol.residual);

  const auto defects = defect_field(graph, sol);
  const double eps = 10.0 * sol.residual + 1e-9;
  const auto aubry = aubry_set(graph, calibration_graph(defects, eps));
  const auto mather = mather_set(graph, defects, eps);
  for (const auto& p : aubry.points) std::printf("aubry  x=%.6f v=%.6f\n", p.x[0], p.v[0]);
  for (const auto& p : mather.points) std::printf("mather x=%.6f v=%.6f\n", p.x[0], p.v[0]);

  const auto cfg = backward_calibrated_configuration(sol, graph, 40, 200);
  std::printf("calibrated curve from x=%.4f ends at x=%.4f\n", graph.grid().point(cfg.nodes.front())[0],
              graph.grid().point(cfg.nodes.back())[0]);
  return 0;
}
