#pragma once

// Discrete Lax-Oleinik fixed point on the edge graph:
//     u(y) + lambda = min_x [u(x) + c(x, y)],   lambda = tau * bar L(tau).
// lambda comes from the minimum mean cycle. u is the multi-source shortest
// path distance (reduced costs c - lambda) from the critical nodes, i.e. the
// nodes on zero-reduced-mean cycles.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <limits>
#include <optional>
#include <queue>
#include <string>
#include <utility>
#include <vector>

#include "weakkam/digraph.hpp"
#include "weakkam/error.hpp"
#include "weakkam/graph.hpp"
#include "weakkam/mean_cycle.hpp"

namespace weakkam {

struct WeakKamSolution {
  double tau = 0.0;
  double lambda = 0.0;  // per-step ergodic value
  double bar_L = 0.0;   // lambda / tau
  std::vector<double> u;  // min u = 0
  double residual = 0.0;
  double tight_tolerance = 0.0;
  std::vector<int> critical_nodes;
  std::vector<std::vector<int>> critical_components;  // sorted node lists, ordered by smallest node
  std::vector<EdgeRef> optimal_cycle;
  MeanCycleMethod method = MeanCycleMethod::karp;
  /// u depends on the multi-source choice when there are several critical components.
  bool potential_unique_up_to_constant() const { return critical_components.size() <= 1; }
};

struct SolveOptions {
  MeanCycleMethod method = MeanCycleMethod::automatic;
  std::optional<double> tight_tolerance;  // default 1e-9 (1 + |lambda|)
};

/// max_y | min_x (u(x) + c(x,y)) - u(y) - lambda |
inline double lax_oleinik_residual(const std::vector<double>& u, double lambda, const EdgeGraph& g) {
  double worst = 0.0;
  for (int y = 0; y < g.node_count(); ++y) {
    double best = std::numeric_limits<double>::infinity();
    for (int k = 0; k < g.stencil_size(); ++k) {
      const int x = g.tail(y, k);
      best = std::min(best, u[static_cast<std::size_t>(x)] + g.cost(x, k));
    }
    worst = std::max(worst, std::abs(best - u[static_cast<std::size_t>(y)] - lambda));
  }
  return worst;
}

inline double lax_oleinik_residual(const WeakKamSolution& sol, const EdgeGraph& g) {
  return lax_oleinik_residual(sol.u, sol.lambda, g);
}

namespace detail {

struct PotentialResult {
  std::vector<double> pi;
  std::vector<EdgeRef> negative_cycle;  // non-empty when relaxation did not settle
};

/// A cycle of the parent-pointer forest, if any (edges in traversal order).
inline std::vector<EdgeRef> parent_cycle(const std::vector<EdgeRef>& parent) {
  const std::size_t n = parent.size();
  std::vector<int> mark(n, -1);
  for (std::size_t s = 0; s < n; ++s) {
    int z = static_cast<int>(s);
    while (z >= 0 && mark[static_cast<std::size_t>(z)] == -1) {
      mark[static_cast<std::size_t>(z)] = static_cast<int>(s);
      z = parent[static_cast<std::size_t>(z)].node;
    }
    if (z >= 0 && mark[static_cast<std::size_t>(z)] == static_cast<int>(s)) {
      std::vector<EdgeRef> cyc;
      int w = z;
      do {
        const EdgeRef e = parent[static_cast<std::size_t>(w)];
        cyc.push_back(e);
        w = e.node;
      } while (w != z);
      std::reverse(cyc.begin(), cyc.end());
      return cyc;
    }
  }
  return {};
}

/// Queue-based Bellman-Ford from a virtual source joined to every node with
/// weight 0, on costs c - lambda. Improvements below `tol` are ignored.
inline PotentialResult reduced_potential(const EdgeGraph& g, double lambda, double tol) {
  const int n = g.node_count();
  const int S = g.stencil_size();
  const auto un = static_cast<std::size_t>(n);
  PotentialResult r;
  r.pi.assign(un, 0.0);
  std::vector<EdgeRef> parent(un, EdgeRef{-1, -1});
  std::vector<int> relaxations(un, 0);
  std::vector<std::uint8_t> queued(un, 1);
  std::deque<int> queue;
  for (int x = 0; x < n; ++x) queue.push_back(x);
  int resets = 0;

  while (!queue.empty()) {
    const int x = queue.front();
    queue.pop_front();
    queued[static_cast<std::size_t>(x)] = 0;
    for (int k = 0; k < S; ++k) {
      const int y = g.head(x, k);
      const auto uy = static_cast<std::size_t>(y);
      const double cand = r.pi[static_cast<std::size_t>(x)] + g.cost(x, k) - lambda;
      if (cand < r.pi[uy] - tol) {
        r.pi[uy] = cand;
        parent[uy] = {x, k};
        if (++relaxations[uy] > n) {
          auto cyc = parent_cycle(parent);
          double weight = 0.0;
          for (const auto& e : cyc) weight += g.cost(e.node, e.offset) - lambda;
          if (!cyc.empty() && weight < 0.0) {
            r.negative_cycle = std::move(cyc);
            return r;
          }
          relaxations[uy] = 0;
          if (++resets > n) throw InternalError("Bellman-Ford relaxation did not settle");
        }
        if (!queued[uy]) {
          queued[uy] = 1;
          queue.push_back(y);
        }
      }
    }
  }
  return r;
}

}  // namespace detail

inline WeakKamSolution solve_weak_kam(const EdgeGraph& g, SolveOptions options = {}) {
  const MeanCycleResult mc = min_mean_cycle(g, options.method);
  double lambda = mc.lambda;
  std::vector<EdgeRef> best_cycle = mc.cycle;
  if (!std::isfinite(lambda)) throw SolverError("non-finite ergodic value");

  double scale = 1.0;
  for (double c : g.costs()) scale = std::max(scale, std::abs(c));
  const double relax_tol = 1e-14 * scale;
  const double consistency_tol = 1e-9 * (1.0 + std::abs(lambda));

  detail::PotentialResult pot;
  for (int attempt = 0;; ++attempt) {
    pot = detail::reduced_potential(g, lambda, relax_tol);
    if (pot.negative_cycle.empty()) break;
    const double mean = cycle_mean(g, pot.negative_cycle);
    if (mean < lambda - consistency_tol || attempt >= 8) {
      throw InternalError("negative cycle in reduced costs (mean " + std::to_string(mean) + " < lambda " +
                          std::to_string(lambda) + "); ergodic value too large");
    }
    lambda = std::min(lambda, mean);  // rounding-level improvement of the cycle mean
    best_cycle = pot.negative_cycle;
  }
  const auto& pi = pot.pi;

  WeakKamSolution sol;
  sol.tau = g.tau();
  sol.lambda = lambda;
  sol.bar_L = lambda / g.tau();
  sol.method = mc.method;
  sol.optimal_cycle = best_cycle;
  sol.tight_tolerance = options.tight_tolerance.value_or(1e-9 * (1.0 + std::abs(lambda)));

  auto reduced = [&](int x, int k) {
    return g.cost(x, k) - lambda + pi[static_cast<std::size_t>(x)] - pi[static_cast<std::size_t>(g.head(x, k))];
  };
  auto tight = [&](int x, int k) { return reduced(x, k) <= sol.tight_tolerance; };
  const SccResult scc = strongly_connected_components(g, tight);

  const int n = g.node_count();
  std::vector<std::vector<int>> by_component(static_cast<std::size_t>(scc.count));
  for (int x = 0; x < n; ++x) {
    const int c = scc.component[static_cast<std::size_t>(x)];
    if (scc.cyclic[static_cast<std::size_t>(c)]) by_component[static_cast<std::size_t>(c)].push_back(x);
  }
  for (auto& comp : by_component)
    if (!comp.empty()) sol.critical_components.push_back(std::move(comp));
  std::sort(sol.critical_components.begin(), sol.critical_components.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
  for (const auto& comp : sol.critical_components)
    sol.critical_nodes.insert(sol.critical_nodes.end(), comp.begin(), comp.end());
  std::sort(sol.critical_nodes.begin(), sol.critical_nodes.end());
  if (sol.critical_nodes.empty()) throw InternalError("no critical cycle in the tight subgraph");

  // Dijkstra on nonnegative reweighted costs, every critical node a source at u = 0.
  const auto un = static_cast<std::size_t>(n);
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> dist(un, inf);
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  for (int z : sol.critical_nodes) {
    dist[static_cast<std::size_t>(z)] = -pi[static_cast<std::size_t>(z)];
    heap.emplace(dist[static_cast<std::size_t>(z)], z);
  }
  std::vector<std::uint8_t> done(un, 0);
  while (!heap.empty()) {
    const auto [d, x] = heap.top();
    heap.pop();
    if (done[static_cast<std::size_t>(x)]) continue;
    done[static_cast<std::size_t>(x)] = 1;
    for (int k = 0; k < g.stencil_size(); ++k) {
      const int y = g.head(x, k);
      const double cand = d + std::max(0.0, reduced(x, k));
      if (cand < dist[static_cast<std::size_t>(y)]) {
        dist[static_cast<std::size_t>(y)] = cand;
        heap.emplace(cand, y);
      }
    }
  }
  sol.u.resize(un);
  for (std::size_t y = 0; y < un; ++y) {
    if (!std::isfinite(dist[y]))
      throw DataError("node " + std::to_string(y) +
                      " is not reachable from a minimum-mean cycle; the graph is not strongly connected and has no "
                      "single ergodic value");
    sol.u[y] = pi[y] + dist[y];
  }
  const double lowest = *std::min_element(sol.u.begin(), sol.u.end());
  for (double& v : sol.u) v -= lowest;
  sol.residual = lax_oleinik_residual(sol, g);
  return sol;
}

/// Backward sequence x_0, x_{-1}, ..., x_{-n}; step k goes x_{-k-1} -> x_{-k}.
struct CalibratedConfiguration {
  double tau = 0.0;
  std::vector<int> nodes;
  std::vector<int> offsets;  // stencil entry of step k
  std::vector<double> defects;
  std::vector<Vec2> velocities;

  int steps() const { return static_cast<int>(offsets.size()); }
  EdgeRef edge(int k) const {
    return {nodes[static_cast<std::size_t>(k) + 1], offsets[static_cast<std::size_t>(k)]};
  }
};

/// Greedy backward calibration: each step takes a predecessor attaining the
/// Lax-Oleinik minimum, ties broken by smallest node index then offset index.
inline CalibratedConfiguration backward_calibrated_configuration(const WeakKamSolution& sol, const EdgeGraph& g,
                                                                 int x0, int n_steps) {
  if (n_steps < 1) throw ConfigError("calibrated configuration needs at least one step");
  if (x0 < 0 || x0 >= g.node_count()) throw ConfigError("start node out of range");
  double scale = 1.0;
  for (double v : sol.u) scale = std::max(scale, std::abs(v));
  const double tie = 1e-12 * scale;

  CalibratedConfiguration cfg;
  cfg.tau = g.tau();
  cfg.nodes.push_back(x0);
  int y = x0;
  for (int step = 0; step < n_steps; ++step) {
    double best = std::numeric_limits<double>::infinity();
    std::vector<double> defects(static_cast<std::size_t>(g.stencil_size()));
    for (int k = 0; k < g.stencil_size(); ++k) {
      const int x = g.tail(y, k);
      defects[static_cast<std::size_t>(k)] =
          sol.u[static_cast<std::size_t>(x)] + g.cost(x, k) - sol.u[static_cast<std::size_t>(y)] - sol.lambda;
      best = std::min(best, defects[static_cast<std::size_t>(k)]);
    }
    int pick_node = -1, pick_offset = -1;
    for (int k = 0; k < g.stencil_size(); ++k) {
      if (defects[static_cast<std::size_t>(k)] > best + tie) continue;
      const int x = g.tail(y, k);
      if (pick_node < 0 || x < pick_node || (x == pick_node && k < pick_offset)) {
        pick_node = x;
        pick_offset = k;
      }
    }
    cfg.nodes.push_back(pick_node);
    cfg.offsets.push_back(pick_offset);
    cfg.defects.push_back(defects[static_cast<std::size_t>(pick_offset)]);
    cfg.velocities.push_back(g.velocity(pick_offset));
    y = pick_node;
  }
  return cfg;
}

struct VelocityReport {
  double max_speed = 0.0;
  bool within_bound = true;
};

inline VelocityReport velocity_check(const CalibratedConfiguration& cfg, const VelocityBound& bound) {
  VelocityReport r;
  for (const auto& v : cfg.velocities) r.max_speed = std::max(r.max_speed, norm(v));
  r.within_bound = r.max_speed <= bound.D * (1.0 + 1e-12);
  return r;
}

}  // namespace weakkam
