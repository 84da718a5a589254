#pragma once

// tau sweeps: per tau build the stencil graph, solve, extract the discrete
// Mather and Aubry sets and compare them with a reference set through
// one-sided Hausdorff excesses.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "weakkam/aubry.hpp"
#include "weakkam/bound.hpp"
#include "weakkam/calibration.hpp"
#include "weakkam/error.hpp"
#include "weakkam/graph.hpp"
#include "weakkam/mather.hpp"
#include "weakkam/model.hpp"
#include "weakkam/reference.hpp"
#include "weakkam/weakkam.hpp"

namespace weakkam {

/// Grid spacing as a function of tau: h = min(c_h tau^2, tau D / 4), or a fixed N.
struct HCoupling {
  double c_h = 1.0;
  std::optional<int> fixed_N;

  int nodes_per_axis(double tau, double D) const {
    if (fixed_N) return *fixed_N;
    if (!(c_h > 0.0)) throw ConfigError("h-coupling constant must be positive");
    const double h = std::min(c_h * tau * tau, tau * D / 4.0);
    return std::max(2, static_cast<int>(std::ceil(1.0 / h - 1e-9)));
  }
};

enum class EpsilonRuleKind {
  residual,  // 10 residual + 1e-9
  spatial,   // 10 residual + h
  fixed,     // value
};

inline const char* to_string(EpsilonRuleKind k) {
  switch (k) {
    case EpsilonRuleKind::residual: return "residual";
    case EpsilonRuleKind::spatial: return "spatial";
    default: return "fixed";
  }
}

struct EpsilonRule {
  EpsilonRuleKind kind = EpsilonRuleKind::residual;
  double value = 0.0;

  double operator()(double residual, double h) const {
    switch (kind) {
      case EpsilonRuleKind::residual: return 10.0 * residual + 1e-9;
      case EpsilonRuleKind::spatial: return 10.0 * residual + h;
      default: return value;
    }
  }
};

struct SweepPlan {
  LagrangianModel model = models::free_particle(1);
  std::vector<double> taus;
  HCoupling coupling;
  std::optional<double> user_D;  // otherwise derived per tau
  double D_safety = 1.5;
  EpsilonRule aubry_epsilon{EpsilonRuleKind::residual};
  EpsilonRule mather_epsilon{EpsilonRuleKind::residual};
  ReferenceSet reference;
  MeanCycleMethod method = MeanCycleMethod::automatic;
  BuildOptions build;
  bool keep_sets = false;
};

struct SweepRow {
  double tau = 0.0;
  int N = 0;
  double h = 0.0;
  double D = 0.0;
  double bar_L = 0.0;
  double alpha_gap = 0.0;  // |bar L + alpha|
  double residual = 0.0;
  double eps_aubry = 0.0;
  double eps_mather = 0.0;
  std::size_t aubry_size = 0;
  std::size_t mather_size = 0;
  double e_aubry_to_ref = 0.0;
  double e_ref_to_aubry = 0.0;
  double e_mather_to_ref = 0.0;
  double e_ref_to_mather = 0.0;
  std::string method;
  double runtime_s = 0.0;
  std::string error;  // nonempty when the row failed
  PhaseSet aubry;     // filled when keep_sets
  PhaseSet mather;

  bool ok() const { return error.empty(); }
};

struct SweepReport {
  std::vector<SweepRow> rows;
  double alpha = 0.0;
};

inline SweepRow sweep_row(const SweepPlan& plan, double tau) {
  const auto start = std::chrono::steady_clock::now();
  SweepRow row;
  row.tau = tau;
  try {
    const VelocityBound bound =
        plan.user_D ? VelocityBound::user(*plan.user_D) : velocity_bound(plan.model, tau, std::nullopt, plan.D_safety);
    row.D = bound.D;
    row.N = plan.coupling.nodes_per_axis(tau, bound.D);
    const TorusGrid grid = build_grid(plan.model.dimension(), row.N);
    row.h = grid.spacing();
    const EdgeGraph g = build_edge_graph(grid, plan.model, tau, bound, plan.build);
    SolveOptions so;
    so.method = plan.method;
    const WeakKamSolution sol = solve_weak_kam(g, so);
    row.method = to_string(sol.method);
    row.bar_L = sol.bar_L;
    row.alpha_gap = std::abs(sol.bar_L + plan.reference.alpha);
    row.residual = sol.residual;
    const DefectField defects = defect_field(g, sol);
    row.eps_aubry = plan.aubry_epsilon(sol.residual, row.h);
    row.eps_mather = plan.mather_epsilon(sol.residual, row.h);
    PhaseSet aubry = aubry_set(g, calibration_graph(defects, row.eps_aubry));
    PhaseSet mather = mather_set(g, defects, row.eps_mather);
    row.aubry_size = aubry.size();
    row.mather_size = mather.size();
    row.e_aubry_to_ref = plan.reference.excess_to(aubry);
    row.e_ref_to_aubry = plan.reference.excess_from(aubry);
    row.e_mather_to_ref = plan.reference.excess_to(mather);
    row.e_ref_to_mather = plan.reference.excess_from(mather);
    if (plan.keep_sets) {
      row.aubry = std::move(aubry);
      row.mather = std::move(mather);
    }
  } catch (const Error& e) {
    row.error = e.what();
  }
  row.runtime_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return row;
}

/// Rows in the order of `plan.taus`, which must be strictly decreasing.
/// A failing row records its error and the sweep continues.
inline SweepReport tau_sweep(const SweepPlan& plan) {
  if (plan.taus.empty()) throw ConfigError("sweep needs at least one tau");
  for (std::size_t i = 0; i < plan.taus.size(); ++i) {
    if (!(plan.taus[i] > 0.0) || !std::isfinite(plan.taus[i])) throw ConfigError("tau values must be positive");
    if (i > 0 && !(plan.taus[i] < plan.taus[i - 1])) throw ConfigError("tau list must be strictly decreasing");
  }
  if (plan.reference.dimension != plan.model.dimension()) throw ConfigError("reference and model dimensions differ");
  SweepReport report;
  report.alpha = plan.reference.alpha;
  for (double tau : plan.taus) report.rows.push_back(sweep_row(plan, tau));
  return report;
}

struct TrendEntry {
  std::string name;
  bool monotone = false;  // non-increasing within a 20% band
  double first = 0.0;
  double last = 0.0;
  double slope = 0.0;     // d log e / d log tau
  bool trending_to_zero = false;
};

struct KuratowskiReport {
  std::vector<TrendEntry> entries;  // aubry limsup, aubry liminf, mather limsup, mather liminf
  bool aubry_limsup = false;
  bool aubry_liminf = false;
  bool mather_limsup = false;
  bool mather_liminf = false;
};

/// Least-squares slope of log(value) against log(tau) over positive values.
inline double log_log_slope(const std::vector<double>& taus, const std::vector<double>& values) {
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < taus.size(); ++i)
    if (values[i] > 0.0) {
      lx.push_back(std::log(taus[i]));
      ly.push_back(std::log(values[i]));
    }
  if (lx.size() < 2) return 0.0;
  const double n = static_cast<double>(lx.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    mx += lx[i] / n;
    my += ly[i] / n;
  }
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxy += (lx[i] - mx) * (ly[i] - my);
    sxx += (lx[i] - mx) * (lx[i] - mx);
  }
  return sxx > 0.0 ? sxy / sxx : 0.0;
}

inline TrendEntry trend(std::string name, const std::vector<double>& taus, const std::vector<double>& values) {
  constexpr double band = 1.2;
  constexpr double zero = 1e-12;
  TrendEntry t;
  t.name = std::move(name);
  t.first = values.front();
  t.last = values.back();
  t.monotone = true;
  for (std::size_t i = 1; i < values.size(); ++i)
    if (values[i] > band * values[i - 1] + zero) t.monotone = false;
  t.slope = log_log_slope(taus, values);
  t.trending_to_zero = t.monotone && (t.last <= zero || (t.last < t.first && t.slope > 0.0));
  return t;
}

/// Trend verdicts over the successful rows; needs at least three.
inline KuratowskiReport kuratowski_report(const SweepReport& report) {
  std::vector<const SweepRow*> rows;
  for (const auto& r : report.rows)
    if (r.ok()) rows.push_back(&r);
  if (rows.size() < 3)
    throw ConfigError("Kuratowski report needs at least 3 successful rows, got " + std::to_string(rows.size()));
  std::vector<double> taus;
  for (const auto* r : rows) taus.push_back(r->tau);
  auto column = [&](double SweepRow::*field) {
    std::vector<double> v;
    for (const auto* r : rows) v.push_back(r->*field);
    return v;
  };
  KuratowskiReport k;
  k.entries.push_back(trend("aubry_limsup", taus, column(&SweepRow::e_aubry_to_ref)));
  k.entries.push_back(trend("aubry_liminf", taus, column(&SweepRow::e_ref_to_aubry)));
  k.entries.push_back(trend("mather_limsup", taus, column(&SweepRow::e_mather_to_ref)));
  k.entries.push_back(trend("mather_liminf", taus, column(&SweepRow::e_ref_to_mather)));
  k.aubry_limsup = k.entries[0].trending_to_zero;
  k.aubry_liminf = k.entries[1].trending_to_zero;
  k.mather_limsup = k.entries[2].trending_to_zero;
  k.mather_liminf = k.entries[3].trending_to_zero;
  return k;
}

}  // namespace weakkam
