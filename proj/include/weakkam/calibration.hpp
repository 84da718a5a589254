#pragma once

// Calibration defect G(x, o) = u(x) + c(x, o) - u(x + o h) - lambda on every
// edge, the epsilon-sublevel subgraph, and finite phase sets built from edges.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "weakkam/error.hpp"
#include "weakkam/geometry.hpp"
#include "weakkam/graph.hpp"
#include "weakkam/weakkam.hpp"

namespace weakkam {

struct DefectField {
  double tau = 0.0;
  std::vector<double> g;  // per edge, node-major
  double min_defect = 0.0;
  double max_node_min = 0.0;  // max over nodes of the smallest in-edge defect
};

/// Domination violations beyond this raise SolverError.
inline constexpr double kDominationTolerance = 1e-6;

inline DefectField defect_field(const EdgeGraph& graph, const WeakKamSolution& sol) {
  if (sol.u.size() != static_cast<std::size_t>(graph.node_count()))
    throw ConfigError("solution and graph sizes differ");
  DefectField f;
  f.tau = graph.tau();
  f.g.resize(graph.edge_count());
  f.min_defect = std::numeric_limits<double>::infinity();
  for (int x = 0; x < graph.node_count(); ++x) {
    for (int k = 0; k < graph.stencil_size(); ++k) {
      const double d = sol.u[static_cast<std::size_t>(x)] + graph.cost(x, k) -
                       sol.u[static_cast<std::size_t>(graph.head(x, k))] - sol.lambda;
      f.g[graph.edge_index(x, k)] = d;
      f.min_defect = std::min(f.min_defect, d);
    }
  }
  for (int y = 0; y < graph.node_count(); ++y) {
    double best = std::numeric_limits<double>::infinity();
    for (int k = 0; k < graph.stencil_size(); ++k) best = std::min(best, f.g[graph.edge_index(graph.tail(y, k), k)]);
    f.max_node_min = std::max(f.max_node_min, best);
  }
  if (f.min_defect < -kDominationTolerance)
    throw SolverError("calibration defect " + std::to_string(f.min_defect) + " violates domination");
  return f;
}

/// Edges with defect <= epsilon.
struct CalibrationGraph {
  double epsilon = 0.0;
  std::vector<std::uint8_t> keep;  // per edge
  std::size_t edge_count = 0;

  bool contains(const EdgeGraph& g, int node, int offset) const { return keep[g.edge_index(node, offset)] != 0; }
};

inline CalibrationGraph calibration_graph(const DefectField& defects, double epsilon) {
  if (!(epsilon >= 0.0)) throw DomainError("calibration tolerance must be nonnegative");
  CalibrationGraph c;
  c.epsilon = epsilon;
  c.keep.resize(defects.g.size());
  for (std::size_t i = 0; i < defects.g.size(); ++i) {
    c.keep[i] = defects.g[i] <= epsilon ? 1 : 0;
    c.edge_count += c.keep[i];
  }
  return c;
}

enum class PhaseSetKind { mather, aubry, reference, support };

inline const char* to_string(PhaseSetKind k) {
  switch (k) {
    case PhaseSetKind::mather: return "mather";
    case PhaseSetKind::aubry: return "aubry";
    case PhaseSetKind::reference: return "reference";
    default: return "support";
  }
}

/// Finite subset of T^d x R^d. Discrete sets list points in edge order.
struct PhaseSet {
  std::vector<PhasePoint> points;
  std::vector<EdgeRef> edges;  // source edges for discrete kinds
  int dimension = 1;
  double tau = 0.0;
  double epsilon = 0.0;
  PhaseSetKind kind = PhaseSetKind::reference;
  std::vector<std::string> warnings;

  bool empty() const { return points.empty(); }
  std::size_t size() const { return points.size(); }
};

inline PhaseSet phase_set_from_edges(const EdgeGraph& g, std::vector<EdgeRef> edges, PhaseSetKind kind,
                                     double epsilon) {
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  PhaseSet s;
  s.dimension = g.grid().dimension();
  s.tau = g.tau();
  s.epsilon = epsilon;
  s.kind = kind;
  s.edges = std::move(edges);
  for (const auto& e : s.edges) s.points.push_back(g.phase_point(e));
  return s;
}

/// Exact point-set inclusion a in b.
inline bool is_subset(const PhaseSet& a, const PhaseSet& b) {
  std::vector<PhasePoint> sorted_b = b.points;
  std::sort(sorted_b.begin(), sorted_b.end());
  return std::all_of(a.points.begin(), a.points.end(),
                     [&](const PhasePoint& p) { return std::binary_search(sorted_b.begin(), sorted_b.end(), p); });
}

}  // namespace weakkam
