#pragma once

// Analytic reference sets in T^d x R^d and one-sided Hausdorff excesses
//     e(A -> B) = sup_{a in A} inf_{b in B} d(a, b),
// with d((x, v), (x', v')) = torus distance + |v - v'|.

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "weakkam/calibration.hpp"
#include "weakkam/error.hpp"
#include "weakkam/geometry.hpp"
#include "weakkam/model.hpp"
#include "weakkam/parallel.hpp"

namespace weakkam {

namespace detail {

inline double distance_to_set(const PhasePoint& p, const std::vector<PhasePoint>& set) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& q : set) best = std::min(best, phase_distance(p, q));
  return best;
}

inline double max_distance_to_set(const std::vector<PhasePoint>& from, const std::vector<PhasePoint>& to) {
  std::vector<double> d(from.size());
  parallel_for(0, from.size(), [&](std::size_t i) { d[i] = distance_to_set(from[i], to); }, 64);
  return d.empty() ? 0.0 : *std::max_element(d.begin(), d.end());
}

}  // namespace detail

inline double hausdorff_excess(const PhaseSet& a, const PhaseSet& b) {
  if (a.empty() || b.empty()) throw DomainError("Hausdorff excess of an empty set");
  return detail::max_distance_to_set(a.points, b.points);
}

enum class ReferenceKind { zero_section, point_list };

inline const char* to_string(ReferenceKind k) { return k == ReferenceKind::zero_section ? "zero-section" : "point-list"; }

/// Reference Aubry/Mather set with its critical value alpha(H).
struct ReferenceSet {
  ReferenceKind kind = ReferenceKind::point_list;
  int dimension = 1;
  double alpha = 0.0;
  std::vector<PhasePoint> points;  // point_list only
  int samples_per_axis = 0;        // zero_section: sampling of T^d for the reverse excess

  /// e(A -> reference).
  double excess_to(const PhaseSet& a) const {
    if (a.empty()) throw DomainError("Hausdorff excess of an empty set");
    if (kind == ReferenceKind::zero_section) {
      double worst = 0.0;
      for (const auto& p : a.points) worst = std::max(worst, norm(p.v));
      return worst;
    }
    return detail::max_distance_to_set(a.points, points);
  }

  /// e(reference -> A). For the zero section T^d x {0} the supremum is taken
  /// over a uniform sample of T^d, so it is accurate to half a sample step.
  double excess_from(const PhaseSet& a) const {
    if (a.empty()) throw DomainError("Hausdorff excess of an empty set");
    if (kind == ReferenceKind::point_list) return detail::max_distance_to_set(points, a.points);
    const int n = samples_per_axis > 0 ? samples_per_axis : (dimension == 1 ? 8192 : 256);
    std::vector<PhasePoint> sample;
    for (int i = 0; i < n; ++i) {
      if (dimension == 1) {
        sample.push_back({Vec2{(i + 0.5) / n}, Vec2{0.0}});
      } else {
        for (int j = 0; j < n; ++j) sample.push_back({Vec2{(i + 0.5) / n, (j + 0.5) / n}, Vec2{0.0}});
      }
    }
    return detail::max_distance_to_set(sample, a.points);
  }
};

inline ReferenceSet zero_section_reference(int dimension, double alpha = 0.0) {
  ReferenceSet r;
  r.kind = ReferenceKind::zero_section;
  r.dimension = dimension;
  r.alpha = alpha;
  return r;
}

inline ReferenceSet point_reference(int dimension, std::vector<PhasePoint> points, double alpha) {
  if (points.empty()) throw ConfigError("reference point list is empty");
  for (auto& p : points) {
    if (!is_finite(p.x) || !is_finite(p.v)) throw ConfigError("reference point is not finite");
    p.x = wrap_unit(p.x);
  }
  ReferenceSet r;
  r.kind = ReferenceKind::point_list;
  r.dimension = dimension;
  r.alpha = alpha;
  r.points = std::move(points);
  return r;
}

/// Mechanical reference: argmax V x {0}, alpha = max V. Maximisers are found
/// on a dense sample and polished by Newton's method on grad V.
inline ReferenceSet mechanical_reference(const LagrangianModel& model) {
  if (!model.is_separable()) throw ConfigError("mechanical reference needs a separable model");
  const int d = model.dimension();
  const int n = d == 1 ? 4096 : 256;
  std::vector<Vec2> xs;
  for (int i = 0; i < n; ++i) {
    if (d == 1) {
      xs.push_back(Vec2{static_cast<double>(i) / n});
    } else {
      for (int j = 0; j < n; ++j) xs.push_back(Vec2{static_cast<double>(i) / n, static_cast<double>(j) / n});
    }
  }
  double vmax = -std::numeric_limits<double>::infinity();
  for (const auto& x : xs) vmax = std::max(vmax, model.potential(x));
  // candidates: samples within the sampling error of the maximum
  double curvature = 0.0;
  for (const auto& t : model.potential_terms())
    curvature += std::abs(t.amplitude) * kTwoPi * kTwoPi *
                 (t.frequency[0] * t.frequency[0] + t.frequency[1] * t.frequency[1]);
  const double slack = curvature / (2.0 * n * n) * d + 1e-12;

  auto polish = [&](Vec2 x) {
    constexpr double fd = 1e-6;
    for (int it = 0; it < 50; ++it) {
      const Vec2 g = model.potential_gradient(x);
      if (norm(g) < 1e-13) break;
      Mat2 hess = Mat2::zero();
      for (int j = 0; j < d; ++j) {
        Vec2 e;
        e[static_cast<std::size_t>(j)] = fd;
        const Vec2 col = (model.potential_gradient(x + e) - model.potential_gradient(x - e)) / (2.0 * fd);
        hess(0, j) = col[0];
        hess(1, j) = col[1];
      }
      if (d == 1) hess(1, 1) = -1.0;
      if (std::abs(hess.determinant()) < 1e-14) break;
      Vec2 step = hess.inverse() * g;
      if (d == 1) step[1] = 0.0;
      x = wrap_unit(x - step);
    }
    return x;
  };

  std::vector<PhasePoint> found;
  double alpha = vmax;
  for (const auto& x : xs) {
    if (model.potential(x) < vmax - slack) continue;
    const Vec2 p = polish(x);
    alpha = std::max(alpha, model.potential(p));
    found.push_back({p, Vec2{0.0}});
  }
  std::vector<PhasePoint> kept;
  for (const auto& p : found) {
    if (model.potential(p.x) < alpha - 1e-10 * (1.0 + std::abs(alpha))) continue;
    const bool dup = std::any_of(kept.begin(), kept.end(),
                                 [&](const PhasePoint& q) { return torus_distance(p.x, q.x) < 1e-7; });
    if (!dup) kept.push_back(p);
  }
  std::sort(kept.begin(), kept.end());
  return point_reference(d, std::move(kept), alpha);
}

/// Reads "x,v" (d = 1) or "x1,x2,v1,v2" (d = 2) rows; '#' lines and a
/// non-numeric header row are skipped.
inline ReferenceSet csv_reference(const std::string& path, int dimension, double alpha) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open reference CSV " + path);
  std::vector<PhasePoint> pts;
  std::string line;
  int row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty() || line[0] == '#') continue;
    std::vector<double> vals;
    std::stringstream ss(line);
    std::string cell;
    bool numeric = true;
    while (std::getline(ss, cell, ',')) {
      try {
        std::size_t used = 0;
        vals.push_back(std::stod(cell, &used));
      } catch (const std::exception&) {
        numeric = false;
        break;
      }
    }
    if (!numeric) {
      if (pts.empty()) continue;
      throw ConfigError("non-numeric row " + std::to_string(row) + " in " + path);
    }
    const std::size_t want = dimension == 1 ? 2 : 4;
    if (vals.size() != want) throw ConfigError("row " + std::to_string(row) + " of " + path + " has wrong arity");
    if (dimension == 1)
      pts.push_back({Vec2{vals[0]}, Vec2{vals[1]}});
    else
      pts.push_back({Vec2{vals[0], vals[1]}, Vec2{vals[2], vals[3]}});
  }
  return point_reference(dimension, std::move(pts), alpha);
}

/// The reference as a PhaseSet; the zero section is sampled.
inline PhaseSet reference_phase_set(const ReferenceSet& r) {
  PhaseSet s;
  s.kind = PhaseSetKind::reference;
  s.dimension = r.dimension;
  if (r.kind == ReferenceKind::point_list) {
    s.points = r.points;
  } else {
    const int n = r.dimension == 1 ? 256 : 32;
    for (int i = 0; i < n; ++i) {
      if (r.dimension == 1)
        s.points.push_back({Vec2{static_cast<double>(i) / n}, Vec2{0.0}});
      else
        for (int j = 0; j < n; ++j)
          s.points.push_back({Vec2{static_cast<double>(i) / n, static_cast<double>(j) / n}, Vec2{0.0}});
    }
  }
  return s;
}

}  // namespace weakkam
