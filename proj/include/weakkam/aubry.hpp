#pragma once

// Discrete Aubry set: phase points (x, o h / tau) of edges lying on some
// bi-infinite path of the calibration graph. On a finite graph an edge a -> b
// is on such a path iff a is reachable from a cycle and b reaches a cycle.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <limits>
#include <utility>
#include <vector>

#include "weakkam/calibration.hpp"
#include "weakkam/digraph.hpp"
#include "weakkam/error.hpp"
#include "weakkam/graph.hpp"

namespace weakkam {

namespace detail {

struct CycleStructure {
  SccResult scc;
  std::vector<std::uint8_t> on_cycle_component;  // node lies in a cyclic SCC
  std::vector<std::uint8_t> from_cycle;           // reachable from a cyclic SCC
  std::vector<std::uint8_t> to_cycle;             // reaches a cyclic SCC
};

inline CycleStructure cycle_structure(const EdgeGraph& g, const CalibrationGraph& cal) {
  auto keep = [&](int x, int k) { return cal.contains(g, x, k); };
  CycleStructure cs;
  cs.scc = strongly_connected_components(g, keep);
  cs.on_cycle_component.assign(static_cast<std::size_t>(g.node_count()), 0);
  for (int x = 0; x < g.node_count(); ++x)
    cs.on_cycle_component[static_cast<std::size_t>(x)] =
        cs.scc.cyclic[static_cast<std::size_t>(cs.scc.component[static_cast<std::size_t>(x)])];
  cs.from_cycle = reachable(g, cs.on_cycle_component, true, keep);
  cs.to_cycle = reachable(g, cs.on_cycle_component, false, keep);
  return cs;
}

}  // namespace detail

inline PhaseSet aubry_set(const EdgeGraph& g, const CalibrationGraph& cal) {
  const auto cs = detail::cycle_structure(g, cal);
  std::vector<EdgeRef> edges;
  for (int x = 0; x < g.node_count(); ++x) {
    if (!cs.from_cycle[static_cast<std::size_t>(x)]) continue;
    for (int k = 0; k < g.stencil_size(); ++k)
      if (cal.contains(g, x, k) && cs.to_cycle[static_cast<std::size_t>(g.head(x, k))]) edges.push_back({x, k});
  }
  PhaseSet s = phase_set_from_edges(g, std::move(edges), PhaseSetKind::aubry, cal.epsilon);
  if (s.empty()) s.warnings.push_back("calibration graph has no cycle; Aubry set is empty");
  return s;
}

/// Cycle - path - edge - path - cycle certificate that an edge lies on a
/// bi-infinite path of the calibration graph.
struct AubryWitness {
  EdgeRef edge;
  std::vector<EdgeRef> backward_cycle;
  std::vector<EdgeRef> lead_in;   // from backward_cycle to edge.node
  std::vector<EdgeRef> lead_out;  // from head(edge) to forward_cycle
  std::vector<EdgeRef> forward_cycle;

  /// lead_in + edge + lead_out.
  std::vector<EdgeRef> path() const {
    std::vector<EdgeRef> p(lead_in);
    p.push_back(edge);
    p.insert(p.end(), lead_out.begin(), lead_out.end());
    return p;
  }
};

/// Throws DataError when the edge is not in the Aubry set of `cal`.
inline AubryWitness aubry_witness(const EdgeGraph& g, const CalibrationGraph& cal, const EdgeRef& edge) {
  const auto cs = detail::cycle_structure(g, cal);
  auto keep = [&](int x, int k) { return cal.contains(g, x, k); };
  const int a = edge.node, b = g.head(edge.node, edge.offset);
  if (!keep(a, edge.offset) || !cs.from_cycle[static_cast<std::size_t>(a)] || !cs.to_cycle[static_cast<std::size_t>(b)])
    throw DataError("edge is not on a bi-infinite calibrated path");

  const auto n = static_cast<std::size_t>(g.node_count());
  auto cycle_in_component = [&](int z) {
    const int comp = cs.scc.component[static_cast<std::size_t>(z)];
    return shortest_cycle_through(g, z, keep,
                                  [&](int w) { return cs.scc.component[static_cast<std::size_t>(w)] == comp; });
  };

  AubryWitness w;
  w.edge = edge;

  // backwards BFS from a to the nearest cyclic node
  {
    std::vector<EdgeRef> next(n, EdgeRef{-1, -1});  // edge leaving a node toward a
    std::vector<std::uint8_t> seen(n, 0);
    std::deque<int> queue{a};
    seen[static_cast<std::size_t>(a)] = 1;
    int hit = -1;
    while (!queue.empty() && hit < 0) {
      const int y = queue.front();
      queue.pop_front();
      if (cs.on_cycle_component[static_cast<std::size_t>(y)]) {
        hit = y;
        break;
      }
      for (int k = 0; k < g.stencil_size(); ++k) {
        const int x = g.tail(y, k);
        if (!keep(x, k) || seen[static_cast<std::size_t>(x)]) continue;
        seen[static_cast<std::size_t>(x)] = 1;
        next[static_cast<std::size_t>(x)] = {x, k};
        queue.push_back(x);
      }
    }
    if (hit < 0) throw InternalError("no backward cycle for an Aubry edge");
    for (int z = hit; z != a;) {
      const EdgeRef e = next[static_cast<std::size_t>(z)];
      w.lead_in.push_back(e);
      z = g.head(e.node, e.offset);
    }
    w.backward_cycle = cycle_in_component(hit);
  }
  // forward BFS from b to the nearest cyclic node
  {
    std::vector<EdgeRef> prev(n, EdgeRef{-1, -1});
    std::vector<std::uint8_t> seen(n, 0);
    std::deque<int> queue{b};
    seen[static_cast<std::size_t>(b)] = 1;
    int hit = -1;
    while (!queue.empty()) {
      const int x = queue.front();
      queue.pop_front();
      if (cs.on_cycle_component[static_cast<std::size_t>(x)]) {
        hit = x;
        break;
      }
      for (int k = 0; k < g.stencil_size(); ++k) {
        if (!keep(x, k)) continue;
        const int y = g.head(x, k);
        if (seen[static_cast<std::size_t>(y)]) continue;
        seen[static_cast<std::size_t>(y)] = 1;
        prev[static_cast<std::size_t>(y)] = {x, k};
        queue.push_back(y);
      }
    }
    if (hit < 0) throw InternalError("no forward cycle for an Aubry edge");
    for (int z = hit; z != b;) {
      const EdgeRef e = prev[static_cast<std::size_t>(z)];
      w.lead_out.push_back(e);
      z = e.node;
    }
    std::reverse(w.lead_out.begin(), w.lead_out.end());
    w.forward_cycle = cycle_in_component(hit);
  }
  return w;
}

/// Stencil entry of an integer offset, or -1.
inline int find_offset(const EdgeGraph& g, const Offset& o) {
  const auto& st = g.stencil();
  auto it = std::lower_bound(st.begin(), st.end(), o);
  if (it != st.end() && *it == o) return static_cast<int>(it - st.begin());
  for (int k = 0; k < g.stencil_size(); ++k)
    if (st[static_cast<std::size_t>(k)] == o) return k;
  return -1;
}

/// Nearest graph edge of a phase point: nearest node, velocity rounded to the stencil.
inline EdgeRef project_to_edge(const EdgeGraph& g, const PhasePoint& p) {
  const double cells = g.tau() / g.grid().spacing();
  Offset o{static_cast<int>(std::lround(p.v[0] * cells)), 0};
  if (g.grid().dimension() == 2) o[1] = static_cast<int>(std::lround(p.v[1] * cells));
  const int k = find_offset(g, o);
  if (k < 0) throw DataError("phase point velocity lies outside the stencil");
  return {g.grid().nearest_node(p.x), k};
}

struct NearbyAubry {
  double eta = 0.0;   // max defect along the projected orbit
  double dist = 0.0;  // distance of the orbit's central point to the Aubry set
};

inline NearbyAubry nearby_aubry_distance(const EdgeGraph& g, const std::vector<PhasePoint>& orbit,
                                         const DefectField& defects, const PhaseSet& aubry) {
  if (orbit.empty()) throw DomainError("empty orbit");
  if (aubry.empty()) throw DomainError("empty Aubry set");
  NearbyAubry r;
  for (const auto& p : orbit) r.eta = std::max(r.eta, defects.g[g.edge_index(project_to_edge(g, p))]);
  const PhasePoint& centre = orbit[orbit.size() / 2];
  r.dist = std::numeric_limits<double>::infinity();
  for (const auto& q : aubry.points) r.dist = std::min(r.dist, phase_distance(centre, q));
  return r;
}

/// Empirical modulus of continuity: omega(eta) = max dist over samples with defect <= eta.
class EmpiricalModulus {
 public:
  explicit EmpiricalModulus(std::vector<NearbyAubry> samples) : table_(std::move(samples)) {
    std::sort(table_.begin(), table_.end(), [](const auto& a, const auto& b) { return a.eta < b.eta; });
    double running = 0.0;
    for (auto& s : table_) {
      running = std::max(running, s.dist);
      s.dist = running;
    }
  }

  double operator()(double eta) const {
    double out = 0.0;
    for (const auto& s : table_) {
      if (s.eta > eta) break;
      out = s.dist;
    }
    return out;
  }

  const std::vector<NearbyAubry>& table() const { return table_; }

 private:
  std::vector<NearbyAubry> table_;
};

}  // namespace weakkam
