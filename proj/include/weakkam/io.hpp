#pragma once

// CSV and JSON emission for solver objects, and a binary edge-graph cache.
// Numbers are printed with round-trip precision so reruns are byte-identical.

#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "weakkam/aubry.hpp"
#include "weakkam/calibration.hpp"
#include "weakkam/error.hpp"
#include "weakkam/flow.hpp"
#include "weakkam/graph.hpp"
#include "weakkam/mather.hpp"
#include "weakkam/sweep.hpp"
#include "weakkam/weakkam.hpp"

namespace weakkam::io {

inline std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << text;
}

/// 64-bit FNV-1a.
inline std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

inline std::string hex(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

namespace detail {

inline void point_columns(std::ostringstream& os, int dim) {
  if (dim == 1)
    os << "x,v";
  else
    os << "x1,x2,v1,v2";
}

inline void point_values(std::ostringstream& os, const PhasePoint& p, int dim) {
  if (dim == 1)
    os << num(p.x[0]) << ',' << num(p.v[0]);
  else
    os << num(p.x[0]) << ',' << num(p.x[1]) << ',' << num(p.v[0]) << ',' << num(p.v[1]);
}

}  // namespace detail

inline std::string phase_set_csv(const PhaseSet& s) {
  std::ostringstream os;
  detail::point_columns(os, s.dimension);
  const bool has_edges = s.edges.size() == s.points.size();
  if (has_edges) os << ",node,offset";
  os << '\n';
  for (std::size_t i = 0; i < s.points.size(); ++i) {
    detail::point_values(os, s.points[i], s.dimension);
    if (has_edges) os << ',' << s.edges[i].node << ',' << s.edges[i].offset;
    os << '\n';
  }
  return os.str();
}

inline std::string measure_csv(const EdgeGraph& g, const EdgeMeasure& m) {
  const int dim = g.grid().dimension();
  std::ostringstream os;
  detail::point_columns(os, dim);
  os << ",weight,node,offset\n";
  for (std::size_t i = 0; i < m.size(); ++i) {
    detail::point_values(os, g.phase_point(m.edges[i]), dim);
    os << ',' << num(m.weights[i]) << ',' << m.edges[i].node << ',' << m.edges[i].offset << '\n';
  }
  return os.str();
}

inline std::string potential_csv(const TorusGrid& grid, const std::vector<double>& u) {
  std::ostringstream os;
  os << (grid.dimension() == 1 ? "node,x,u\n" : "node,x1,x2,u\n");
  for (int x = 0; x < grid.node_count(); ++x) {
    const Vec2 p = grid.point(x);
    os << x << ',' << num(p[0]) << ',';
    if (grid.dimension() == 2) os << num(p[1]) << ',';
    os << num(u[static_cast<std::size_t>(x)]) << '\n';
  }
  return os.str();
}

inline std::string orbit_csv(const std::vector<PhaseState>& orbit, const std::vector<double>& defects, int dim) {
  std::ostringstream os;
  os << "k,";
  detail::point_columns(os, dim);
  os << ",defect\n";
  for (std::size_t k = 0; k < orbit.size(); ++k) {
    os << k << ',';
    detail::point_values(os, orbit[k], dim);
    os << ',' << (k < defects.size() ? num(defects[k]) : std::string()) << '\n';
  }
  return os.str();
}

/// Sweep table without wall-clock columns.
inline std::string sweep_csv(const SweepReport& r) {
  std::ostringstream os;
  os << "tau,N,h,D,bar_L,alpha_gap,residual,eps_aubry,eps_mather,aubry_size,mather_size,"
        "e_aubry_to_ref,e_ref_to_aubry,e_mather_to_ref,e_ref_to_mather,method,error\n";
  for (const auto& row : r.rows) {
    os << num(row.tau) << ',' << row.N << ',' << num(row.h) << ',' << num(row.D) << ',' << num(row.bar_L) << ','
       << num(row.alpha_gap) << ',' << num(row.residual) << ',' << num(row.eps_aubry) << ',' << num(row.eps_mather)
       << ',' << row.aubry_size << ',' << row.mather_size << ',' << num(row.e_aubry_to_ref) << ','
       << num(row.e_ref_to_aubry) << ',' << num(row.e_mather_to_ref) << ',' << num(row.e_ref_to_mather) << ','
       << row.method << ",\"";
    for (char c : row.error) os << (c == '"' ? '\'' : c);
    os << "\"\n";
  }
  return os.str();
}

inline nlohmann::json edges_json(const EdgeGraph& g, const std::vector<EdgeRef>& edges) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& e : edges) {
    const PhasePoint p = g.phase_point(e);
    const Offset& o = g.stencil()[static_cast<std::size_t>(e.offset)];
    out.push_back({{"node", e.node},
                   {"offset", {o[0], o[1]}},
                   {"head", g.head(e.node, e.offset)},
                   {"x", {p.x[0], p.x[1]}},
                   {"v", {p.v[0], p.v[1]}}});
  }
  return out;
}

inline nlohmann::json witness_json(const EdgeGraph& g, const DefectField& defects, const AubryWitness& w) {
  double total = 0.0;
  for (const auto& e : w.path()) total += defects.g[g.edge_index(e)];
  return {{"edge", edges_json(g, {w.edge})[0]},
          {"backward_cycle", edges_json(g, w.backward_cycle)},
          {"lead_in", edges_json(g, w.lead_in)},
          {"lead_out", edges_json(g, w.lead_out)},
          {"forward_cycle", edges_json(g, w.forward_cycle)},
          {"path_defect", total}};
}

inline nlohmann::json kuratowski_json(const KuratowskiReport& k) {
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& e : k.entries)
    entries.push_back({{"name", e.name},
                       {"monotone", e.monotone},
                       {"first", e.first},
                       {"last", e.last},
                       {"log_log_slope", e.slope},
                       {"trending_to_zero", e.trending_to_zero}});
  return {{"entries", entries},
          {"aubry_limsup_consistent", k.aubry_limsup},
          {"aubry_liminf_consistent", k.aubry_liminf},
          {"mather_limsup_consistent", k.mather_limsup},
          {"mather_liminf_consistent", k.mather_liminf}};
}

// Graph cache: "WKGRAPH1", key, dimension, N, tau, D, stencil, costs.

inline constexpr char kGraphMagic[8] = {'W', 'K', 'G', 'R', 'A', 'P', 'H', '1'};

namespace detail {
template <typename T>
void put(std::ofstream& out, const T& v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}
template <typename T>
bool get(std::ifstream& in, T& v) {
  return static_cast<bool>(in.read(reinterpret_cast<char*>(&v), sizeof(T)));
}
}  // namespace detail

inline void save_graph(const std::filesystem::path& path, std::uint64_t key, const EdgeGraph& g) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  const auto tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw ConfigError("cannot write graph cache " + tmp);
    out.write(kGraphMagic, sizeof kGraphMagic);
    detail::put(out, key);
    detail::put(out, static_cast<std::int32_t>(g.grid().dimension()));
    detail::put(out, static_cast<std::int32_t>(g.grid().per_axis()));
    detail::put(out, g.tau());
    detail::put(out, g.velocity_cap());
    detail::put(out, static_cast<std::uint64_t>(g.stencil().size()));
    for (const auto& o : g.stencil()) {
      detail::put(out, static_cast<std::int32_t>(o[0]));
      detail::put(out, static_cast<std::int32_t>(o[1]));
    }
    out.write(reinterpret_cast<const char*>(g.costs().data()),
              static_cast<std::streamsize>(g.costs().size() * sizeof(double)));
  }
  std::filesystem::rename(tmp, path);
}

/// The cached graph, or nullopt on a missing file, a bad magic or a different key.
inline std::optional<EdgeGraph> load_graph(const std::filesystem::path& path, std::uint64_t key) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  char magic[8];
  if (!in.read(magic, sizeof magic) || std::memcmp(magic, kGraphMagic, sizeof magic) != 0) return std::nullopt;
  std::uint64_t stored = 0, stencil_size = 0;
  std::int32_t dim = 0, per_axis = 0;
  double tau = 0.0, D = 0.0;
  if (!detail::get(in, stored) || stored != key) return std::nullopt;
  if (!detail::get(in, dim) || !detail::get(in, per_axis) || !detail::get(in, tau) || !detail::get(in, D) ||
      !detail::get(in, stencil_size))
    return std::nullopt;
  const TorusGrid grid(dim, per_axis);
  std::vector<Offset> stencil(stencil_size);
  for (auto& o : stencil) {
    std::int32_t a = 0, b = 0;
    if (!detail::get(in, a) || !detail::get(in, b)) return std::nullopt;
    o = {a, b};
  }
  std::vector<double> costs(stencil_size * static_cast<std::uint64_t>(grid.node_count()));
  if (!in.read(reinterpret_cast<char*>(costs.data()), static_cast<std::streamsize>(costs.size() * sizeof(double))))
    return std::nullopt;
  return EdgeGraph(grid, tau, D, std::move(stencil), std::move(costs));
}

}  // namespace weakkam::io
