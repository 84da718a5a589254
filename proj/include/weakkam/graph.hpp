#pragma once

// Torus grids and the velocity-stencil edge graph. Every node x carries one
// out-edge per stencil offset o, landing on x + o h (with wraparound) and
// costing tau * L(x, o h / tau). The stencil is shared by all nodes, so the
// graph is regular and in-edges are recovered by subtracting offsets.

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "weakkam/error.hpp"
#include "weakkam/geometry.hpp"
#include "weakkam/model.hpp"
#include "weakkam/parallel.hpp"

namespace weakkam {

class TorusGrid {
 public:
  TorusGrid(int dimension, int per_axis) : dimension_(dimension), per_axis_(per_axis) {
    if (dimension != 1 && dimension != 2)
      throw ConfigError("grid dimension must be 1 or 2, got " + std::to_string(dimension));
    if (per_axis < 2) throw ConfigError("grid needs at least 2 nodes per axis, got " + std::to_string(per_axis));
    if (dimension == 2 && per_axis > 46340) throw ConfigError("grid too large");
  }

  int dimension() const { return dimension_; }
  int per_axis() const { return per_axis_; }
  double spacing() const { return 1.0 / per_axis_; }
  int node_count() const { return dimension_ == 1 ? per_axis_ : per_axis_ * per_axis_; }

  /// Lexicographic index: (i, j) -> i * N + j.
  int index(const Offset& coords) const {
    const int i = wrap_index(coords[0]);
    return dimension_ == 1 ? i : i * per_axis_ + wrap_index(coords[1]);
  }

  Offset coords(int node) const {
    if (dimension_ == 1) return {node, 0};
    return {node / per_axis_, node % per_axis_};
  }

  Vec2 point(int node) const {
    const Offset c = coords(node);
    return Vec2{c[0] * spacing(), c[1] * spacing()};
  }

  int shifted(int node, const Offset& o) const {
    const Offset c = coords(node);
    return index({c[0] + o[0], c[1] + o[1]});
  }

  /// Node nearest to x in the torus metric; ties go to the lower index.
  int nearest_node(const Vec2& x) const {
    const Vec2 p = wrap_unit(x);
    Offset c{0, 0};
    for (int a = 0; a < dimension_; ++a) c[static_cast<std::size_t>(a)] = static_cast<int>(std::floor(p[static_cast<std::size_t>(a)] * per_axis_ + 0.5));
    return index(c);
  }

  friend bool operator==(const TorusGrid&, const TorusGrid&) = default;

 private:
  int wrap_index(int i) const {
    const int r = i % per_axis_;
    return r < 0 ? r + per_axis_ : r;
  }

  int dimension_;
  int per_axis_;
};

inline TorusGrid build_grid(int dimension, int per_axis) { return TorusGrid(dimension, per_axis); }

/// y - x reduced into [-1/2, 1/2)^d, ties resolved to -1/2.
inline Vec2 minimal_displacement(const TorusGrid& grid, const Vec2& x, const Vec2& y) {
  Vec2 d = torus_displacement(x, y);
  if (grid.dimension() == 1) d[1] = 0.0;
  return d;
}

enum class BoundProvenance { user, derived };

/// Speed cap D for calibrated configurations.
struct VelocityBound {
  double D = 0.0;
  BoundProvenance provenance = BoundProvenance::user;
  double lambda_coarse = 0.0;  // tau * bar L(tau) of the coarse pre-solve
  double bar_L_coarse = 0.0;
  double K_lip = 0.0;
  double C_of_Kplus1 = 0.0;
  double safety = 1.0;

  static VelocityBound user(double D) {
    if (!(D > 0.0) || !std::isfinite(D)) throw ConfigError("velocity bound D must be positive");
    return {D, BoundProvenance::user};
  }
};

/// Outgoing edge of `node` through stencil entry `offset`.
struct EdgeRef {
  int node = 0;
  int offset = 0;
  friend constexpr bool operator==(const EdgeRef&, const EdgeRef&) = default;
  friend constexpr auto operator<=>(const EdgeRef&, const EdgeRef&) = default;
};

struct BuildOptions {
  std::size_t max_edges = 100'000'000;
};

class EdgeGraph {
 public:
  /// Assembles a graph from explicit costs (laid out node-major, offset-minor).
  EdgeGraph(TorusGrid grid, double tau, double D, std::vector<Offset> stencil, std::vector<double> costs)
      : grid_(grid), tau_(tau), D_(D), stencil_(std::move(stencil)), costs_(std::move(costs)) {
    if (!(tau_ > 0.0)) throw DomainError("time step must be positive");
    if (stencil_.empty()) throw ConfigError("empty stencil");
    if (costs_.size() != static_cast<std::size_t>(node_count()) * stencil_.size())
      throw ConfigError("cost table size does not match nodes x stencil");
    for (double c : costs_)
      if (!std::isfinite(c)) throw DataError("edge costs must be finite");
    heads_.resize(costs_.size());
    tails_.resize(costs_.size());
    for (int x = 0; x < node_count(); ++x) {
      for (int k = 0; k < stencil_size(); ++k) {
        const Offset& o = stencil_[static_cast<std::size_t>(k)];
        heads_[edge_index(x, k)] = grid_.shifted(x, o);
        tails_[edge_index(x, k)] = grid_.shifted(x, {-o[0], -o[1]});
      }
    }
    for (int k = 0; k < stencil_size(); ++k)
      if (stencil_[static_cast<std::size_t>(k)] == Offset{0, 0}) zero_offset_ = k;
  }

  const TorusGrid& grid() const { return grid_; }
  double tau() const { return tau_; }
  double velocity_cap() const { return D_; }
  int node_count() const { return grid_.node_count(); }
  int stencil_size() const { return static_cast<int>(stencil_.size()); }
  std::size_t edge_count() const { return costs_.size(); }
  const std::vector<Offset>& stencil() const { return stencil_; }
  const std::vector<double>& costs() const { return costs_; }
  const std::vector<std::string>& warnings() const { return warnings_; }
  void add_warning(std::string w) { warnings_.push_back(std::move(w)); }

  /// Index of the zero offset, or -1 when absent (hand-built graphs only).
  int zero_offset() const { return zero_offset_; }

  std::size_t edge_index(int node, int offset) const {
    return static_cast<std::size_t>(node) * stencil_.size() + static_cast<std::size_t>(offset);
  }
  std::size_t edge_index(const EdgeRef& e) const { return edge_index(e.node, e.offset); }
  EdgeRef edge_ref(std::size_t index) const {
    return {static_cast<int>(index / stencil_.size()), static_cast<int>(index % stencil_.size())};
  }

  double cost(int node, int offset) const { return costs_[edge_index(node, offset)]; }
  int head(int node, int offset) const { return heads_[edge_index(node, offset)]; }
  /// Node x with x + offset = node, i.e. the tail of the in-edge of `node` via `offset`.
  int tail(int node, int offset) const { return tails_[edge_index(node, offset)]; }

  /// Lifted velocity o h / tau of a stencil entry.
  Vec2 velocity(int offset) const {
    const Offset& o = stencil_[static_cast<std::size_t>(offset)];
    const double h = grid_.spacing();
    return Vec2{o[0] * h / tau_, o[1] * h / tau_};
  }

  PhasePoint phase_point(const EdgeRef& e) const { return {grid_.point(e.node), velocity(e.offset)}; }

  EdgeGraph with_costs(std::vector<double> costs) const {
    EdgeGraph g(grid_, tau_, D_, stencil_, std::move(costs));
    g.warnings_ = warnings_;
    return g;
  }

 private:
  TorusGrid grid_;
  double tau_;
  double D_;
  std::vector<Offset> stencil_;
  std::vector<double> costs_;
  std::vector<int> heads_;
  std::vector<int> tails_;
  int zero_offset_ = -1;
  std::vector<std::string> warnings_;
};

/// All integer offsets o with |o| h <= tau D (Euclidean norm), lexicographic.
inline std::vector<Offset> velocity_stencil(const TorusGrid& grid, double tau, double D) {
  const double reach = tau * D * (1.0 + 1e-12);
  const double h = grid.spacing();
  const double radius_cells = reach / h;
  if (!std::isfinite(radius_cells) || radius_cells > 1e7) throw ConfigError("stencil radius too large");
  const int r = static_cast<int>(std::floor(radius_cells));
  std::vector<Offset> out;
  if (grid.dimension() == 1) {
    for (int i = -r; i <= r; ++i)
      if (std::abs(i) * h <= reach) out.push_back({i, 0});
  } else {
    for (int i = -r; i <= r; ++i)
      for (int j = -r; j <= r; ++j)
        if (std::hypot(i * h, j * h) <= reach) out.push_back({i, j});
  }
  return out;
}

/// Builds the stencil graph with costs tau * L(x, o h / tau). Displacements
/// are taken as lifts in R^d: when the stencil reaches past half the torus,
/// two offsets can share a head and both edges are kept.
inline EdgeGraph build_edge_graph(const TorusGrid& grid, const LagrangianModel& model, double tau,
                                  const VelocityBound& bound, BuildOptions options = {}) {
  if (!(tau > 0.0) || !std::isfinite(tau)) throw DomainError("time step must be positive");
  if (!(bound.D > 0.0)) throw ConfigError("velocity bound must be positive");
  if (grid.dimension() != model.dimension()) throw ConfigError("grid and model dimensions differ");

  const double reach_cells = tau * bound.D / grid.spacing();
  const double estimate =
      grid.dimension() == 1 ? 2.0 * reach_cells + 1.0 : 3.1416 * (reach_cells + 1.0) * (reach_cells + 1.0);
  if (estimate * grid.node_count() > 4.0 * static_cast<double>(options.max_edges)) {
    throw ConfigError("edge graph would exceed the memory cap of " + std::to_string(options.max_edges) +
                      " edges; lower N or D");
  }
  auto stencil = velocity_stencil(grid, tau, bound.D);
  const std::size_t edges = stencil.size() * static_cast<std::size_t>(grid.node_count());
  if (edges > options.max_edges) {
    const double per_node = static_cast<double>(options.max_edges) / static_cast<double>(stencil.size());
    const int suggested_N = grid.dimension() == 1 ? static_cast<int>(per_node)
                                                  : static_cast<int>(std::sqrt(per_node));
    throw ConfigError("edge graph has " + std::to_string(edges) + " edges, above the cap of " +
                      std::to_string(options.max_edges) + "; try N <= " + std::to_string(suggested_N) +
                      " or a smaller D");
  }

  const int S = static_cast<int>(stencil.size());
  std::vector<Vec2> velocities(stencil.size());
  for (int k = 0; k < S; ++k) {
    const Offset& o = stencil[static_cast<std::size_t>(k)];
    velocities[static_cast<std::size_t>(k)] = Vec2{o[0] * grid.spacing() / tau, o[1] * grid.spacing() / tau};
  }
  std::vector<double> costs(edges);
  parallel_for(0, static_cast<std::size_t>(grid.node_count()), [&](std::size_t x) {
    const Vec2 p = grid.point(static_cast<int>(x));
    for (int k = 0; k < S; ++k)
      costs[x * stencil.size() + static_cast<std::size_t>(k)] = tau * eval_lagrangian(model, p, velocities[static_cast<std::size_t>(k)]);
  }, 16);

  EdgeGraph g(grid, tau, bound.D, std::move(stencil), std::move(costs));
  if (S == 1) {
    g.add_warning("tau * D = " + std::to_string(tau * bound.D) + " is below the grid spacing " +
                  std::to_string(grid.spacing()) + "; stencil holds only the zero offset");
  }
  return g;
}

}  // namespace weakkam
