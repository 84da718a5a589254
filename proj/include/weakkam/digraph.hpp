#pragma once

// Strongly connected components and reachability over edge subsets of an
// EdgeGraph. An edge subset is any predicate keep(node, offset).

#include <algorithm>
#include <cstdint>
#include <deque>
#include <vector>

#include "weakkam/graph.hpp"

namespace weakkam {

struct SccResult {
  std::vector<int> component;  // node -> component id, ids in order of discovery completion
  int count = 0;
  std::vector<std::uint8_t> cyclic;  // component has at least one internal kept edge
};

/// Iterative Tarjan over the kept edges.
template <typename Keep>
SccResult strongly_connected_components(const EdgeGraph& g, Keep&& keep) {
  const int n = g.node_count();
  const int S = g.stencil_size();
  std::vector<int> index(static_cast<std::size_t>(n), -1), low(static_cast<std::size_t>(n), 0);
  std::vector<std::uint8_t> on_stack(static_cast<std::size_t>(n), 0);
  std::vector<int> stack;
  SccResult r;
  r.component.assign(static_cast<std::size_t>(n), -1);

  struct Frame {
    int node;
    int next_offset;
  };
  std::vector<Frame> call;
  int counter = 0;

  for (int root = 0; root < n; ++root) {
    if (index[static_cast<std::size_t>(root)] != -1) continue;
    call.push_back({root, 0});
    index[static_cast<std::size_t>(root)] = low[static_cast<std::size_t>(root)] = counter++;
    stack.push_back(root);
    on_stack[static_cast<std::size_t>(root)] = 1;

    while (!call.empty()) {
      Frame& f = call.back();
      const auto v = static_cast<std::size_t>(f.node);
      if (f.next_offset < S) {
        const int k = f.next_offset++;
        if (!keep(f.node, k)) continue;
        const int w = g.head(f.node, k);
        const auto wi = static_cast<std::size_t>(w);
        if (index[wi] == -1) {
          index[wi] = low[wi] = counter++;
          stack.push_back(w);
          on_stack[wi] = 1;
          call.push_back({w, 0});
        } else if (on_stack[wi]) {
          low[v] = std::min(low[v], index[wi]);
        }
        continue;
      }
      if (low[v] == index[v]) {
        int w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[static_cast<std::size_t>(w)] = 0;
          r.component[static_cast<std::size_t>(w)] = r.count;
        } while (w != f.node);
        ++r.count;
      }
      const int finished = f.node;
      call.pop_back();
      if (!call.empty()) {
        const auto parent = static_cast<std::size_t>(call.back().node);
        low[parent] = std::min(low[parent], low[static_cast<std::size_t>(finished)]);
      }
    }
  }

  r.cyclic.assign(static_cast<std::size_t>(r.count), 0);
  for (int x = 0; x < n; ++x)
    for (int k = 0; k < S; ++k)
      if (keep(x, k) && r.component[static_cast<std::size_t>(x)] == r.component[static_cast<std::size_t>(g.head(x, k))])
        r.cyclic[static_cast<std::size_t>(r.component[static_cast<std::size_t>(x)])] = 1;
  return r;
}

/// Nodes reachable from any seed along kept edges (forward = true) or
/// reaching a seed (forward = false).
template <typename Keep>
std::vector<std::uint8_t> reachable(const EdgeGraph& g, const std::vector<std::uint8_t>& seeds, bool forward,
                                    Keep&& keep) {
  const int n = g.node_count();
  const int S = g.stencil_size();
  std::vector<std::uint8_t> seen(seeds);
  std::deque<int> queue;
  for (int x = 0; x < n; ++x)
    if (seen[static_cast<std::size_t>(x)]) queue.push_back(x);
  while (!queue.empty()) {
    const int x = queue.front();
    queue.pop_front();
    for (int k = 0; k < S; ++k) {
      if (forward) {
        if (!keep(x, k)) continue;
        const int y = g.head(x, k);
        if (!seen[static_cast<std::size_t>(y)]) {
          seen[static_cast<std::size_t>(y)] = 1;
          queue.push_back(y);
        }
      } else {
        const int y = g.tail(x, k);
        if (!keep(y, k)) continue;
        if (!seen[static_cast<std::size_t>(y)]) {
          seen[static_cast<std::size_t>(y)] = 1;
          queue.push_back(y);
        }
      }
    }
  }
  return seen;
}

/// Shortest cycle through `start` using kept edges whose endpoints both
/// satisfy `inside`. Returns the edges in traversal order, empty if none.
template <typename Keep, typename Inside>
std::vector<EdgeRef> shortest_cycle_through(const EdgeGraph& g, int start, Keep&& keep, Inside&& inside) {
  const int S = g.stencil_size();
  for (int k = 0; k < S; ++k)
    if (keep(start, k) && g.head(start, k) == start) return {EdgeRef{start, k}};

  std::vector<EdgeRef> parent(static_cast<std::size_t>(g.node_count()), EdgeRef{-1, -1});
  std::deque<int> queue{start};
  parent[static_cast<std::size_t>(start)] = {start, -1};
  while (!queue.empty()) {
    const int x = queue.front();
    queue.pop_front();
    for (int k = 0; k < S; ++k) {
      if (!keep(x, k)) continue;
      const int y = g.head(x, k);
      if (!inside(y)) continue;
      if (y == start) {
        std::vector<EdgeRef> cycle{EdgeRef{x, k}};
        for (int z = x; z != start;) {
          const EdgeRef e = parent[static_cast<std::size_t>(z)];
          cycle.push_back(e);
          z = e.node;
        }
        std::reverse(cycle.begin(), cycle.end());
        return cycle;
      }
      if (parent[static_cast<std::size_t>(y)].node != -1) continue;
      parent[static_cast<std::size_t>(y)] = {x, k};
      queue.push_back(y);
    }
  }
  return {};
}

}  // namespace weakkam
