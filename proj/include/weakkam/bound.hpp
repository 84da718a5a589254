#pragma once

// Derived speed cap for calibrated configurations. From the calibration
// identity, the Lipschitz constant K of u and superlinearity with slope K+1,
//     |v| <= bar L(tau) - C(K+1),
// so D = safety * (|bar L| + |C(K+1)|) bounds every calibrated velocity.
// K and bar L are estimated on a coarse solve whose stencil joins every pair
// of nodes, so the coarse problem needs no a priori D.

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "weakkam/error.hpp"
#include "weakkam/graph.hpp"
#include "weakkam/model.hpp"
#include "weakkam/weakkam.hpp"

namespace weakkam {

inline constexpr int kCoarseNodesPerAxis = 16;

/// Graph on `grid` whose stencil holds every minimal torus displacement.
inline EdgeGraph full_torus_graph(const TorusGrid& grid, const LagrangianModel& model, double tau) {
  const int N = grid.per_axis();
  const int lo = -N / 2, hi = lo + N - 1;
  std::vector<Offset> stencil;
  if (grid.dimension() == 1) {
    for (int i = lo; i <= hi; ++i) stencil.push_back({i, 0});
  } else {
    for (int i = lo; i <= hi; ++i)
      for (int j = lo; j <= hi; ++j) stencil.push_back({i, j});
  }
  std::vector<double> costs;
  costs.reserve(stencil.size() * static_cast<std::size_t>(grid.node_count()));
  const double h = grid.spacing();
  for (int x = 0; x < grid.node_count(); ++x)
    for (const auto& o : stencil)
      costs.push_back(tau * eval_lagrangian(model, grid.point(x), Vec2{o[0] * h / tau, o[1] * h / tau}));
  double reach = 0.0;
  for (const auto& o : stencil) reach = std::max(reach, std::hypot(o[0] * h, o[1] * h) / tau);
  return EdgeGraph(grid, tau, reach, std::move(stencil), std::move(costs));
}

/// Largest difference quotient of u between grid neighbours.
inline double lipschitz_estimate(const TorusGrid& grid, const std::vector<double>& u) {
  double k = 0.0;
  for (int x = 0; x < grid.node_count(); ++x) {
    for (int axis = 0; axis < grid.dimension(); ++axis) {
      Offset o{0, 0};
      o[static_cast<std::size_t>(axis)] = 1;
      const int y = grid.shifted(x, o);
      k = std::max(k, std::abs(u[static_cast<std::size_t>(y)] - u[static_cast<std::size_t>(x)]) / grid.spacing());
    }
  }
  return k;
}

/// Velocity radius that contains the minimiser of L - K|v| for the given slope.
inline double superlinearity_radius(const LagrangianModel& model, double slope) {
  if (model.is_separable()) return 4.0 * slope / symmetric_eigenvalues(model.mass())[0];
  return 4.0 * slope + 4.0;
}

inline VelocityBound velocity_bound(const LagrangianModel& model, double tau,
                                    const std::optional<WeakKamSolution>& coarse_solution = std::nullopt,
                                    double safety = 1.5) {
  if (!(safety > 0.0) || !std::isfinite(safety)) throw ConfigError("velocity bound safety factor must be positive");
  if (!(tau > 0.0)) throw DomainError("time step must be positive");

  const TorusGrid coarse = build_grid(model.dimension(), kCoarseNodesPerAxis);
  WeakKamSolution sol;
  if (coarse_solution) {
    sol = *coarse_solution;
    if (sol.u.size() != static_cast<std::size_t>(coarse.node_count()))
      throw ConfigError("coarse solution must live on the 16-per-axis grid");
  } else {
    sol = solve_weak_kam(full_torus_graph(coarse, model, tau));
  }
  if (!std::isfinite(sol.lambda) || !std::isfinite(sol.bar_L)) throw SolverError("degenerate coarse solve");

  VelocityBound b;
  b.provenance = BoundProvenance::derived;
  b.safety = safety;
  b.lambda_coarse = sol.lambda;
  b.bar_L_coarse = sol.bar_L;
  b.K_lip = lipschitz_estimate(coarse, sol.u);
  const double slope = b.K_lip + 1.0;
  b.C_of_Kplus1 = superlinearity_constants(model, slope, superlinearity_radius(model, slope)).C_of_K;
  b.D = safety * (std::abs(b.bar_L_coarse) + std::abs(b.C_of_Kplus1));
  if (!(b.D > 0.0) || !std::isfinite(b.D)) throw SolverError("derived velocity bound is not positive");
  return b;
}

}  // namespace weakkam
