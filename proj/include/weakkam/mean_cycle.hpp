#pragma once

// Minimum mean cycle of an EdgeGraph: lambda = min over directed cycles of
// (cycle cost) / (cycle length). On the stencil graph this is the min-plus
// eigenvalue tau * bar L(tau).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "weakkam/error.hpp"
#include "weakkam/graph.hpp"
#include "weakkam/parallel.hpp"

namespace weakkam {

enum class MeanCycleMethod { karp, howard, automatic };

inline const char* to_string(MeanCycleMethod m) {
  switch (m) {
    case MeanCycleMethod::karp: return "karp";
    case MeanCycleMethod::howard: return "howard";
    default: return "automatic";
  }
}

struct MeanCycleResult {
  double lambda = 0.0;
  std::vector<EdgeRef> cycle;  // a cycle whose exact mean is lambda
  MeanCycleMethod method = MeanCycleMethod::karp;
  std::vector<int> policy;  // howard only: chosen in-edge offset per node
  int iterations = 0;
};

/// Karp's table needs (n+1) x n doubles.
inline constexpr int kKarpMaxNodes = 2048;

inline double cycle_mean(const EdgeGraph& g, const std::vector<EdgeRef>& cycle) {
  double sum = 0.0;
  for (const auto& e : cycle) sum += g.cost(e.node, e.offset);
  return sum / static_cast<double>(cycle.size());
}

namespace detail {

inline void check_costs(const EdgeGraph& g) {
  if (g.node_count() == 0) throw DataError("empty graph");
  for (double c : g.costs())
    if (!std::isfinite(c)) throw DataError("non-finite edge cost");
}

inline MeanCycleResult karp(const EdgeGraph& g) {
  const int n = g.node_count();
  const int S = g.stencil_size();
  if (n > kKarpMaxNodes)
    throw ConfigError("Karp needs an (n+1) x n table; n = " + std::to_string(n) + " exceeds " +
                      std::to_string(kKarpMaxNodes) + ", use howard");
  const auto un = static_cast<std::size_t>(n);
  const double inf = std::numeric_limits<double>::infinity();
  // walks[k][v]: cheapest walk with exactly k edges ending at v, any start
  std::vector<double> walks((un + 1) * un, inf);
  std::vector<int> pred((un + 1) * un, -1);  // stencil entry of the last edge
  std::fill(walks.begin(), walks.begin() + n, 0.0);
  for (int k = 1; k <= n; ++k) {
    const double* prev = walks.data() + static_cast<std::size_t>(k - 1) * un;
    double* cur = walks.data() + static_cast<std::size_t>(k) * un;
    int* cur_pred = pred.data() + static_cast<std::size_t>(k) * un;
    parallel_for(0, un, [&](std::size_t v) {
      double best = inf;
      int arg = -1;
      for (int off = 0; off < S; ++off) {
        const int x = g.tail(static_cast<int>(v), off);
        const double cand = prev[x] + g.cost(x, off);
        if (cand < best) {
          best = cand;
          arg = off;
        }
      }
      cur[v] = best;
      cur_pred[v] = arg;
    }, 64);
  }

  const double* last = walks.data() + static_cast<std::size_t>(n) * un;
  double lambda_karp = inf;
  int best_v = -1;
  for (int v = 0; v < n; ++v) {
    if (!std::isfinite(last[v])) continue;
    double worst = -inf;
    for (int k = 0; k < n; ++k) {
      const double dk = walks[static_cast<std::size_t>(k) * un + static_cast<std::size_t>(v)];
      if (!std::isfinite(dk)) continue;
      worst = std::max(worst, (last[v] - dk) / static_cast<double>(n - k));
    }
    if (worst < lambda_karp) {
      lambda_karp = worst;
      best_v = v;
    }
  }
  if (best_v < 0) throw InternalError("Karp found no cycle");

  // Every closed sub-walk of the optimal n-walk into best_v is a minimum mean
  // cycle; report the best one found, with its exactly summed mean.
  std::vector<int> nodes(un + 1);
  std::vector<EdgeRef> edges(un);
  nodes[un] = best_v;
  for (int k = n; k >= 1; --k) {
    const int v = nodes[static_cast<std::size_t>(k)];
    const int off = pred[static_cast<std::size_t>(k) * un + static_cast<std::size_t>(v)];
    const int x = g.tail(v, off);
    nodes[static_cast<std::size_t>(k - 1)] = x;
    edges[static_cast<std::size_t>(k - 1)] = {x, off};
  }
  std::vector<int> last_seen(un, -1);
  MeanCycleResult r;
  r.method = MeanCycleMethod::karp;
  r.lambda = inf;
  for (int i = 0; i <= n; ++i) {
    const int x = nodes[static_cast<std::size_t>(i)];
    const int j = last_seen[static_cast<std::size_t>(x)];
    if (j >= 0) {
      std::vector<EdgeRef> cyc(edges.begin() + j, edges.begin() + i);
      const double mean = cycle_mean(g, cyc);
      if (mean < r.lambda) {
        r.lambda = mean;
        r.cycle = std::move(cyc);
      }
    }
    last_seen[static_cast<std::size_t>(x)] = i;
  }
  if (r.cycle.empty()) throw InternalError("Karp walk contains no cycle");
  r.iterations = n;
  return r;
}

/// Policy iteration on the reversed graph: each node picks one in-edge.
inline MeanCycleResult howard(const EdgeGraph& g, int max_iterations = 0) {
  const int n = g.node_count();
  const int S = g.stencil_size();
  const auto un = static_cast<std::size_t>(n);
  double scale = 1.0;
  for (double c : g.costs()) scale = std::max(scale, std::abs(c));
  const double eps = 1e-12 * scale;
  if (max_iterations <= 0) max_iterations = 100 + 10 * n;

  std::vector<int> policy(un);
  for (int y = 0; y < n; ++y) {
    int arg = 0;
    for (int k = 1; k < S; ++k)
      if (g.cost(g.tail(y, k), k) < g.cost(g.tail(y, arg), arg)) arg = k;
    policy[static_cast<std::size_t>(y)] = arg;
  }

  std::vector<double> eta(un), value(un);
  std::vector<int> state(un);
  std::vector<std::vector<EdgeRef>> cycles;
  std::vector<int> path;

  auto parent = [&](int y) { return g.tail(y, policy[static_cast<std::size_t>(y)]); };

  for (int iter = 1; iter <= max_iterations; ++iter) {
    // value determination
    std::fill(state.begin(), state.end(), 0);  // 0 new, 1 on current path, 2 done
    cycles.clear();
    for (int start = 0; start < n; ++start) {
      if (state[static_cast<std::size_t>(start)] != 0) continue;
      path.clear();
      int y = start;
      while (state[static_cast<std::size_t>(y)] == 0) {
        state[static_cast<std::size_t>(y)] = 1;
        path.push_back(y);
        y = parent(y);
      }
      if (state[static_cast<std::size_t>(y)] == 1) {
        // closed a new policy cycle through y
        std::vector<int> chain;  // root, parent(root), parent(parent(root)), ...
        int root = y;
        for (int z = parent(y); z != y; z = parent(z)) root = std::min(root, z);
        for (int z = root;;) {
          chain.push_back(z);
          z = parent(z);
          if (z == root) break;
        }
        // traversal order is the reversed chain: root -> chain.back() -> ... -> root
        std::vector<EdgeRef> cyc;
        for (auto it = chain.rbegin(); it != chain.rend(); ++it)
          if (*it != root) cyc.push_back({parent(*it), policy[static_cast<std::size_t>(*it)]});
        cyc.push_back({parent(root), policy[static_cast<std::size_t>(root)]});
        const double mean = cycle_mean(g, cyc);
        cycles.push_back(std::move(cyc));
        for (int z : chain) {
          eta[static_cast<std::size_t>(z)] = mean;
          state[static_cast<std::size_t>(z)] = 2;
        }
        value[static_cast<std::size_t>(root)] = 0.0;
        for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
          const int z = *it;
          if (z == root) continue;
          const int p = parent(z);
          value[static_cast<std::size_t>(z)] =
              value[static_cast<std::size_t>(p)] + g.cost(p, policy[static_cast<std::size_t>(z)]) - mean;
        }
      }
      // unwind tree nodes on the path (those not on a cycle), nearest to the cycle first
      for (auto it = path.rbegin(); it != path.rend(); ++it) {
        const int z = *it;
        if (state[static_cast<std::size_t>(z)] == 2) continue;
        const int p = parent(z);
        eta[static_cast<std::size_t>(z)] = eta[static_cast<std::size_t>(p)];
        value[static_cast<std::size_t>(z)] =
            value[static_cast<std::size_t>(p)] + g.cost(p, policy[static_cast<std::size_t>(z)]) - eta[static_cast<std::size_t>(z)];
        state[static_cast<std::size_t>(z)] = 2;
      }
    }

    // policy improvement, first on cycle means, then on values
    bool changed = false;
    for (int y = 0; y < n; ++y) {
      const auto uy = static_cast<std::size_t>(y);
      int arg = policy[uy];
      double best = eta[static_cast<std::size_t>(parent(y))];
      for (int k = 0; k < S; ++k) {
        const double e = eta[static_cast<std::size_t>(g.tail(y, k))];
        if (e < best - eps) {
          best = e;
          arg = k;
        }
      }
      if (arg != policy[uy]) {
        policy[uy] = arg;
        changed = true;
      }
    }
    if (!changed) {
      for (int y = 0; y < n; ++y) {
        const auto uy = static_cast<std::size_t>(y);
        int arg = policy[uy];
        double best = value[uy];
        for (int k = 0; k < S; ++k) {
          const int x = g.tail(y, k);
          if (std::abs(eta[static_cast<std::size_t>(x)] - eta[uy]) > eps) continue;
          const double cand = value[static_cast<std::size_t>(x)] + g.cost(x, k) - eta[uy];
          if (cand < best - eps) {
            best = cand;
            arg = k;
          }
        }
        if (arg != policy[uy]) {
          policy[uy] = arg;
          changed = true;
        }
      }
    }
    if (!changed) {
      MeanCycleResult r;
      r.method = MeanCycleMethod::howard;
      r.lambda = std::numeric_limits<double>::infinity();
      for (const auto& cyc : cycles) {
        const double mean = cycle_mean(g, cyc);
        if (mean < r.lambda) {
          r.lambda = mean;
          r.cycle = cyc;
        }
      }
      r.policy = policy;
      r.iterations = iter;
      return r;
    }
  }
  throw SolverError("Howard policy iteration did not converge in " + std::to_string(max_iterations) +
                    " iterations");
}

}  // namespace detail

/// Karp (exact dynamic program, O(nm)) or Howard (policy iteration). The
/// automatic choice runs Karp while its table stays small.
inline MeanCycleResult min_mean_cycle(const EdgeGraph& g, MeanCycleMethod method = MeanCycleMethod::automatic) {
  detail::check_costs(g);
  if (method == MeanCycleMethod::automatic) {
    const double work = static_cast<double>(g.node_count()) * static_cast<double>(g.edge_count());
    method = (g.node_count() <= kKarpMaxNodes && work <= 1e9) ? MeanCycleMethod::karp : MeanCycleMethod::howard;
  }
  return method == MeanCycleMethod::karp ? detail::karp(g) : detail::howard(g);
}

}  // namespace weakkam
