#pragma once

// Edge measures on the stencil graph: holonomy, discrete action, the optimal
// cycle measure, the Mather set, Cesaro and recovery measures, and penalized
// selection among Mather measures.

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <functional>
#include <map>
#include <utility>
#include <vector>

#include "weakkam/calibration.hpp"
#include "weakkam/digraph.hpp"
#include "weakkam/error.hpp"
#include "weakkam/geometry.hpp"
#include "weakkam/graph.hpp"
#include "weakkam/weakkam.hpp"

namespace weakkam {

/// Sparse probability measure on edges, sorted by edge.
struct EdgeMeasure {
  double tau = 0.0;
  std::vector<EdgeRef> edges;
  std::vector<double> weights;

  std::size_t size() const { return edges.size(); }
};

/// Merges duplicate edges and sorts. Weights are used as given.
inline EdgeMeasure make_measure(double tau, const std::vector<std::pair<EdgeRef, double>>& entries) {
  std::map<EdgeRef, double> acc;
  for (const auto& [e, w] : entries) acc[e] += w;
  EdgeMeasure m;
  m.tau = tau;
  for (const auto& [e, w] : acc) {
    m.edges.push_back(e);
    m.weights.push_back(w);
  }
  return m;
}

inline void validate_measure(const EdgeMeasure& m) {
  if (m.edges.size() != m.weights.size()) throw DataError("measure edges and weights differ in length");
  double total = 0.0;
  for (double w : m.weights) {
    if (!(w >= 0.0)) throw DataError("negative or non-finite measure weight");
    total += w;
  }
  const double tol = 1e-12 + 4.0 * DBL_EPSILON * static_cast<double>(m.weights.size());
  if (std::abs(total - 1.0) > tol) throw DataError("measure weights do not sum to 1");
}

/// max over nodes of |in-mass - out-mass|.
inline double holonomy_defect(const EdgeMeasure& m, const EdgeGraph& g) {
  validate_measure(m);
  std::vector<double> balance(static_cast<std::size_t>(g.node_count()), 0.0);
  for (std::size_t i = 0; i < m.size(); ++i) {
    const EdgeRef& e = m.edges[i];
    balance[static_cast<std::size_t>(e.node)] -= m.weights[i];
    balance[static_cast<std::size_t>(g.head(e.node, e.offset))] += m.weights[i];
  }
  double worst = 0.0;
  for (double b : balance) worst = std::max(worst, std::abs(b));
  return worst;
}

inline double discrete_action_of_measure(const EdgeGraph& g, const EdgeMeasure& m) {
  double a = 0.0;
  for (std::size_t i = 0; i < m.size(); ++i) a += m.weights[i] * g.cost(m.edges[i].node, m.edges[i].offset);
  return a;
}

/// Uniform measure on a cycle.
inline EdgeMeasure cycle_measure(double tau, const std::vector<EdgeRef>& cycle) {
  std::vector<std::pair<EdgeRef, double>> entries;
  for (const auto& e : cycle) entries.emplace_back(e, 1.0 / static_cast<double>(cycle.size()));
  return make_measure(tau, entries);
}

/// One shortest tight cycle per critical component, uniform on the cycle,
/// equal weight per component.
inline EdgeMeasure optimal_edge_measure(const EdgeGraph& g, const WeakKamSolution& sol) {
  if (sol.critical_components.empty()) throw InternalError("solution has no critical component");
  const DefectField defects = defect_field(g, sol);
  const CalibrationGraph tight = calibration_graph(defects, sol.tight_tolerance);
  auto keep = [&](int x, int k) { return tight.contains(g, x, k); };

  std::vector<int> component_of(static_cast<std::size_t>(g.node_count()), -1);
  for (std::size_t c = 0; c < sol.critical_components.size(); ++c)
    for (int x : sol.critical_components[c]) component_of[static_cast<std::size_t>(x)] = static_cast<int>(c);

  const double share = 1.0 / static_cast<double>(sol.critical_components.size());
  std::vector<std::pair<EdgeRef, double>> entries;
  for (std::size_t c = 0; c < sol.critical_components.size(); ++c) {
    const int root = sol.critical_components[c].front();
    const auto cycle = shortest_cycle_through(
        g, root, keep, [&](int y) { return component_of[static_cast<std::size_t>(y)] == static_cast<int>(c); });
    if (cycle.empty()) throw InternalError("no tight cycle in a critical component");
    for (const auto& e : cycle) entries.emplace_back(e, share / static_cast<double>(cycle.size()));
  }
  return make_measure(g.tau(), entries);
}

/// Edges with defect <= epsilon lying inside a cyclic SCC of that subgraph.
inline PhaseSet mather_set(const EdgeGraph& g, const DefectField& defects, double epsilon) {
  const CalibrationGraph cal = calibration_graph(defects, epsilon);
  auto keep = [&](int x, int k) { return cal.contains(g, x, k); };
  const SccResult scc = strongly_connected_components(g, keep);
  std::vector<EdgeRef> edges;
  for (int x = 0; x < g.node_count(); ++x)
    for (int k = 0; k < g.stencil_size(); ++k)
      if (keep(x, k) && scc.component[static_cast<std::size_t>(x)] ==
                            scc.component[static_cast<std::size_t>(g.head(x, k))])
        edges.push_back({x, k});
  return phase_set_from_edges(g, std::move(edges), PhaseSetKind::mather, epsilon);
}

inline PhaseSet mather_set(const EdgeGraph& g, const WeakKamSolution& sol, double epsilon) {
  return mather_set(g, defect_field(g, sol), epsilon);
}

/// (1/N) sum of point masses on the traversed edges.
inline EdgeMeasure cesaro_measure(const CalibratedConfiguration& cfg) {
  if (cfg.steps() < 1) throw ConfigError("configuration has no steps");
  std::vector<std::pair<EdgeRef, double>> entries;
  const double w = 1.0 / static_cast<double>(cfg.steps());
  for (int k = 0; k < cfg.steps(); ++k) entries.emplace_back(cfg.edge(k), w);
  return make_measure(cfg.tau, entries);
}

struct RecoveryReport {
  EdgeMeasure measure;
  double holonomy_defect = 0.0;
  double action_per_tau = 0.0;  // (1/tau) * action
};

/// Pushes a finely sampled flow orbit onto grid edges: the sample at time s
/// contributes the edge from the node nearest x(s) to the node nearest x(s + tau).
inline RecoveryReport recovery_measure(const EdgeGraph& g, const std::vector<PhasePoint>& orbit, double dt) {
  const double tau = g.tau();
  if (!(dt > 0.0) || dt > tau / 10.0 * (1.0 + 1e-12)) throw DomainError("orbit sampling step must satisfy dt <= tau/10");
  const long stride = std::lround(tau / dt);
  if (std::abs(static_cast<double>(stride) * dt - tau) > 1e-9 * tau)
    throw DomainError("tau must be an integer multiple of the sampling step");
  if (orbit.size() < 2 || static_cast<double>(orbit.size() - 1) * dt < 100.0 * tau * (1.0 - 1e-12))
    throw DomainError("orbit must cover at least 100 tau");

  const TorusGrid& grid = g.grid();
  const int N = grid.per_axis();
  std::vector<std::pair<EdgeRef, double>> entries;
  const std::size_t count = orbit.size() - static_cast<std::size_t>(stride);
  for (std::size_t i = 0; i < count; ++i) {
    const int a = grid.nearest_node(orbit[i].x);
    const int b = grid.nearest_node(orbit[i + static_cast<std::size_t>(stride)].x);
    // lift the displacement with the traversed path so fast orbits keep their winding
    const Vec2 travel = orbit[i + static_cast<std::size_t>(stride)].x - orbit[i].x;
    const Offset ca = grid.coords(a), cb = grid.coords(b);
    Offset o{0, 0};
    for (int axis = 0; axis < grid.dimension(); ++axis) {
      const auto ua = static_cast<std::size_t>(axis);
      int d = cb[ua] - ca[ua];
      const double want = travel[ua] * N;
      d += static_cast<int>(std::lround((want - d) / N)) * N;
      o[ua] = d;
    }
    const auto it = std::find(g.stencil().begin(), g.stencil().end(), o);
    if (it == g.stencil().end()) throw DataError("orbit velocity leaves the stencil bound");
    entries.emplace_back(EdgeRef{a, static_cast<int>(it - g.stencil().begin())}, 1.0 / static_cast<double>(count));
  }
  RecoveryReport r;
  r.measure = make_measure(tau, entries);
  double total = 0.0;
  for (double& w : r.measure.weights) total += w;
  for (double& w : r.measure.weights) w /= total;
  r.holonomy_defect = holonomy_defect(r.measure, g);
  r.action_per_tau = discrete_action_of_measure(g, r.measure) / tau;
  return r;
}

/// Phase-space weight psi(x, v) used to select among Mather measures.
enum class PenaltyKind { bump, constant, trig };

struct Penalty {
  PenaltyKind kind = PenaltyKind::bump;
  Vec2 center{0.5, 0.0};  // bump centre in x
  double radius = 0.25;   // bump support radius in torus distance
  double amplitude = 1.0;
  Offset frequency{1, 0};  // trig: amplitude * cos(2 pi k.x + phase)
  double phase = 0.0;

  double operator()(const PhasePoint& p) const {
    switch (kind) {
      case PenaltyKind::constant: return amplitude;
      case PenaltyKind::trig:
        return amplitude * std::cos(kTwoPi * (frequency[0] * p.x[0] + frequency[1] * p.x[1]) + phase);
      default: {
        const double r = torus_distance(p.x, center) / radius;
        if (r >= 1.0) return 0.0;
        return amplitude * std::exp(1.0 - 1.0 / (1.0 - r * r));
      }
    }
  }
};

struct PenalizedSelection {
  WeakKamSolution solution;  // of the perturbed costs
  EdgeMeasure measure;
  PhaseSet support;
  double penalized_lambda = 0.0;
};

/// Minimises (1/tau) action + epsilon_pen * integral of psi through costs c + epsilon_pen tau psi(x, o h / tau).
inline PenalizedSelection penalized_mather(const EdgeGraph& g, const std::function<double(const PhasePoint&)>& psi,
                                           double epsilon_pen, const SolveOptions& options = {}) {
  if (!(epsilon_pen >= 0.0) || !std::isfinite(epsilon_pen)) throw ConfigError("penalty weight must be nonnegative");
  std::vector<double> costs(g.costs());
  for (int x = 0; x < g.node_count(); ++x)
    for (int k = 0; k < g.stencil_size(); ++k) {
      const double p = psi(g.phase_point({x, k}));
      if (!std::isfinite(p)) throw DomainError("penalty is not finite on the stencil");
      costs[g.edge_index(x, k)] += epsilon_pen * g.tau() * p;
    }
  const EdgeGraph perturbed = g.with_costs(std::move(costs));
  PenalizedSelection s;
  s.solution = solve_weak_kam(perturbed, options);
  s.penalized_lambda = s.solution.lambda;
  s.measure = optimal_edge_measure(perturbed, s.solution);
  s.support = phase_set_from_edges(g, s.measure.edges, PhaseSetKind::support, s.solution.tight_tolerance);
  return s;
}

}  // namespace weakkam
