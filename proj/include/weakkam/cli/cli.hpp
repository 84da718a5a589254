#pragma once

// weakkam <solve|mather|aubry|flow|select|sweep> --config FILE [--out DIR] [--seed N] [--threads N]
//
// Exit status: 0 success, 1 usage error, 2 config/domain/data error, 3 solver error.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "weakkam/all.hpp"
#include "weakkam/cli/config.hpp"
#include "weakkam/io.hpp"
#include "weakkam/svg.hpp"

#ifndef WEAKKAM_VERSION
#define WEAKKAM_VERSION "0.1.0"
#endif

namespace weakkam::cli {

inline constexpr const char* kToolVersion = WEAKKAM_VERSION;

enum ExitCode : int { kOk = 0, kUsage = 1, kConfigError = 2, kSolverError = 3 };

class Stopwatch {
 public:
  void stage(const std::string& name) {
    const auto now = std::chrono::steady_clock::now();
    if (!current_.empty()) timings_[current_] = std::chrono::duration<double>(now - started_).count();
    current_ = name;
    started_ = now;
  }
  json finish() {
    stage("");
    return timings_;
  }

 private:
  std::string current_;
  std::chrono::steady_clock::time_point started_;
  json timings_ = json::object();
};

struct Context {
  RunConfig config;
  std::string hash;
  std::filesystem::path out;
  LagrangianModel model = models::free_particle(1);
  Stopwatch clock;
  std::ostream* log = &std::cout;

  void write(const std::string& name, const std::string& text) const { io::write_text(out / name, text); }
  void write_json(const std::string& name, const json& j) const { write(name, j.dump(2) + "\n"); }
};

struct SingleSolve {
  VelocityBound bound;
  std::optional<EdgeGraph> graph;
  WeakKamSolution solution;
  bool cache_hit = false;
};

inline VelocityBound obtain_bound(const Context& ctx, double tau) {
  if (ctx.config.D) return VelocityBound::user(*ctx.config.D);
  return velocity_bound(ctx.model, tau, std::nullopt, ctx.config.D_safety);
}

/// Builds the stencil graph, going through $WEAKKAM_CACHE_DIR when set.
inline EdgeGraph obtain_graph(const Context& ctx, double tau, const VelocityBound& bound, bool& cache_hit) {
  const int N = ctx.config.nodes_per_axis(tau, bound.D);
  const TorusGrid grid = build_grid(ctx.model.dimension(), N);
  BuildOptions opts;
  opts.max_edges = ctx.config.max_edges;
  cache_hit = false;
  const char* dir = std::getenv("WEAKKAM_CACHE_DIR");
  if (dir == nullptr || *dir == '\0') return build_edge_graph(grid, ctx.model, tau, bound, opts);

  const json key_json = {{"model", canonical_json(ctx.config)["model"]},
                         {"N", N},
                         {"tau", tau},
                         {"D", bound.D},
                         {"max_edges", ctx.config.max_edges}};
  const std::uint64_t key = io::fnv1a(key_json.dump());
  const auto path = std::filesystem::path(dir) / ("graph-" + io::hex(key) + ".bin");
  if (auto cached = io::load_graph(path, key)) {
    cache_hit = true;
    return std::move(*cached);
  }
  EdgeGraph g = build_edge_graph(grid, ctx.model, tau, bound, opts);
  io::save_graph(path, key, g);
  return g;
}

inline SingleSolve single_solve(Context& ctx, double tau) {
  SingleSolve s;
  ctx.clock.stage("bound");
  s.bound = obtain_bound(ctx, tau);
  ctx.clock.stage("graph");
  s.graph.emplace(obtain_graph(ctx, tau, s.bound, s.cache_hit));
  ctx.clock.stage("solve");
  SolveOptions so;
  so.method = ctx.config.method;
  s.solution = solve_weak_kam(*s.graph, so);
  return s;
}

inline ReferenceSet build_reference(const RunConfig& c, const LagrangianModel& model) {
  const auto& r = c.reference;
  const int dim = model.dimension();
  if (r.kind == "mechanical") {
    ReferenceSet ref = mechanical_reference(model);
    if (r.alpha) ref.alpha = *r.alpha;
    return ref;
  }
  if (r.kind == "zero-section") return zero_section_reference(dim, r.alpha.value_or(0.0));
  if (!r.alpha) throw ConfigError("reference.alpha is required for point-list and CSV references");
  if (r.kind == "points") return point_reference(dim, r.points, *r.alpha);
  return csv_reference(r.path, dim, *r.alpha);
}

inline json base_summary(const Context& ctx, const std::string& command) {
  return {{"command", command},
          {"config_hash", ctx.hash},
          {"tool_version", kToolVersion},
          {"seed", ctx.config.seed},
          {"config", canonical_json(ctx.config)}};
}

inline json graph_summary(const SingleSolve& s) {
  const EdgeGraph& g = *s.graph;
  return {{"tau", g.tau()},
          {"N", g.grid().per_axis()},
          {"h", g.grid().spacing()},
          {"D", s.bound.D},
          {"D_provenance", s.bound.provenance == BoundProvenance::user ? "user" : "derived"},
          {"stencil_size", g.stencil_size()},
          {"edges", g.edge_count()},
          {"warnings", g.warnings()}};
}

inline svg::Plot phase_plot(const std::string& title, int dim) {
  svg::Plot p;
  p.title = title;
  p.x_label = dim == 1 ? "x" : "x1";
  p.y_label = dim == 1 ? "v" : "x2";
  p.x_min = 0.0;
  p.x_max = 1.0;
  if (dim == 2) {
    p.y_min = 0.0;
    p.y_max = 1.0;
  }
  return p;
}

inline svg::Series phase_series(const std::string& label, const std::vector<PhasePoint>& pts, int dim,
                                std::size_t color) {
  svg::Series s;
  s.label = label;
  s.lines = false;
  s.color = svg::palette()[color % svg::palette().size()];
  for (const auto& p : pts) {
    s.x.push_back(p.x[0]);
    s.y.push_back(dim == 1 ? p.v[0] : p.x[1]);
  }
  return s;
}

inline int cmd_solve(Context& ctx) {
  const double tau = ctx.config.single_tau();
  SingleSolve s = single_solve(ctx, tau);
  const EdgeGraph& g = *s.graph;
  const WeakKamSolution& sol = s.solution;

  ctx.clock.stage("diagnostics");
  // backward calibrated configurations from evenly spaced nodes
  const int n = g.node_count();
  const int starts = std::min(n, 16);
  double max_speed = 0.0;
  for (int i = 0; i < starts; ++i) {
    const auto cfg = backward_calibrated_configuration(sol, g, i * n / starts, g.grid().per_axis());
    max_speed = std::max(max_speed, velocity_check(cfg, s.bound).max_speed);
  }
  json curve = nullptr;
  if (ctx.model.is_separable()) {
    const double alpha = build_reference(ctx.config, ctx.model).alpha;
    const auto cfg = backward_calibrated_configuration(sol, g, sol.critical_nodes.front(), g.grid().per_axis());
    curve = {{"alpha", alpha}, {"steps", cfg.steps()}, {"residual", calibrated_curve_residual(cfg, g, sol.u, alpha)}};
  }

  ctx.clock.stage("write");
  ctx.write("u.csv", io::potential_csv(g.grid(), sol.u));
  if (g.grid().dimension() == 1) {
    svg::Plot p;
    p.title = "weak KAM solution u";
    p.x_label = "x";
    p.y_label = "u";
    svg::Series su;
    su.label = "u";
    for (int x = 0; x < n; ++x) {
      su.x.push_back(g.grid().point(x)[0]);
      su.y.push_back(sol.u[static_cast<std::size_t>(x)]);
    }
    p.series.push_back(su);
    ctx.write("u.svg", svg::render(p));
  }
  json summary = base_summary(ctx, "solve");
  summary["graph"] = graph_summary(s);
  summary["lambda"] = sol.lambda;
  summary["bar_L"] = sol.bar_L;
  summary["residual"] = sol.residual;
  summary["method"] = to_string(sol.method);
  summary["critical_components"] = sol.critical_components.size();
  summary["critical_nodes"] = sol.critical_nodes.size();
  summary["potential_unique_up_to_constant"] = sol.potential_unique_up_to_constant();
  summary["optimal_cycle"] = io::edges_json(g, sol.optimal_cycle);
  summary["calibrated_max_speed"] = max_speed;
  summary["calibrated_within_bound"] = max_speed <= s.bound.D * (1.0 + 1e-12);
  summary["calibrated_curve"] = curve;
  summary["timings"] = ctx.clock.finish();
  ctx.write_json("summary.json", summary);
  *ctx.log << "bar_L = " << io::num(sol.bar_L) << "  residual = " << sol.residual << "  -> " << ctx.out.string() << "\n";
  return kOk;
}

inline int cmd_mather(Context& ctx) {
  const double tau = ctx.config.single_tau();
  SingleSolve s = single_solve(ctx, tau);
  const EdgeGraph& g = *s.graph;
  const WeakKamSolution& sol = s.solution;
  ctx.clock.stage("mather");
  const EdgeMeasure mu = optimal_edge_measure(g, sol);
  const double eps = ctx.config.mather_epsilon(sol.residual, g.grid().spacing());
  const PhaseSet M = mather_set(g, sol, eps);
  const double action = discrete_action_of_measure(g, mu);
  ctx.clock.stage("write");
  ctx.write("measure.csv", io::measure_csv(g, mu));
  ctx.write("mather.csv", io::phase_set_csv(M));
  svg::Plot p = phase_plot("discrete Mather set", g.grid().dimension());
  p.series.push_back(phase_series("Mather set", M.points, g.grid().dimension(), 0));
  ctx.write("mather.svg", svg::render(p));
  json summary = base_summary(ctx, "mather");
  summary["graph"] = graph_summary(s);
  summary["lambda"] = sol.lambda;
  summary["bar_L"] = sol.bar_L;
  summary["residual"] = sol.residual;
  summary["epsilon"] = eps;
  summary["measure_action"] = action;
  summary["action_minus_lambda"] = action - sol.lambda;
  summary["holonomy_defect"] = holonomy_defect(mu, g);
  summary["measure_support"] = mu.size();
  summary["mather_size"] = M.size();
  summary["timings"] = ctx.clock.finish();
  ctx.write_json("summary.json", summary);
  *ctx.log << "Mather set: " << M.size() << " points, action - lambda = " << action - sol.lambda << "\n";
  return kOk;
}

inline int cmd_aubry(Context& ctx) {
  const double tau = ctx.config.single_tau();
  SingleSolve s = single_solve(ctx, tau);
  const EdgeGraph& g = *s.graph;
  const WeakKamSolution& sol = s.solution;
  const int dim = g.grid().dimension();

  ctx.clock.stage("aubry");
  const DefectField defects = defect_field(g, sol);
  const double eps = ctx.config.aubry_epsilon(sol.residual, g.grid().spacing());
  const CalibrationGraph cal = calibration_graph(defects, eps);
  const PhaseSet A = aubry_set(g, cal);
  const PhaseSet M = mather_set(g, defects, eps);
  json witness = nullptr;
  if (!A.empty()) witness = io::witness_json(g, defects, aubry_witness(g, cal, A.edges.front()));

  ctx.clock.stage("modulus");
  std::mt19937_64 rng(ctx.config.seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::vector<NearbyAubry> samples;
  int skipped = 0;
  const double spread = 0.05;
  for (int i = 0; i < ctx.config.modulus_samples && !A.empty(); ++i) {
    const PhasePoint& a = A.points[static_cast<std::size_t>(rng() % A.size())];
    PhaseState start{a.x, a.v};
    for (int k = 0; k < dim; ++k) {
      start.x[static_cast<std::size_t>(k)] += spread * unit(rng);
      start.v[static_cast<std::size_t>(k)] += spread * unit(rng);
    }
    start.x = wrap_unit(start.x);
    try {
      samples.push_back(nearby_aubry_distance(g, discrete_orbit(ctx.model, tau, start, 20), defects, A));
    } catch (const DataError&) {
      ++skipped;  // orbit left the stencil
    }
  }
  const EmpiricalModulus modulus(samples);

  ctx.clock.stage("write");
  ctx.write("aubry.csv", io::phase_set_csv(A));
  std::string mod = "eta,dist,omega\n";
  {
    std::vector<NearbyAubry> raw = samples;
    std::sort(raw.begin(), raw.end(), [](const auto& x, const auto& y) { return x.eta < y.eta; });
    for (std::size_t i = 0; i < raw.size(); ++i)
      mod += io::num(raw[i].eta) + "," + io::num(raw[i].dist) + "," + io::num(modulus.table()[i].dist) + "\n";
  }
  ctx.write("modulus.csv", mod);
  if (!witness.is_null()) ctx.write_json("witness.json", witness);
  svg::Plot p = phase_plot("discrete Aubry and Mather sets", dim);
  p.series.push_back(phase_series("Aubry set", A.points, dim, 0));
  p.series.push_back(phase_series("Mather set", M.points, dim, 1));
  ctx.write("aubry.svg", svg::render(p));

  json summary = base_summary(ctx, "aubry");
  summary["graph"] = graph_summary(s);
  summary["lambda"] = sol.lambda;
  summary["bar_L"] = sol.bar_L;
  summary["residual"] = sol.residual;
  summary["epsilon"] = eps;
  summary["calibration_edges"] = cal.edge_count;
  summary["aubry_size"] = A.size();
  summary["mather_size"] = M.size();
  summary["mather_subset_of_aubry"] = is_subset(M, A);
  summary["min_defect"] = defects.min_defect;
  summary["warnings"] = A.warnings;
  summary["modulus_samples"] = samples.size();
  summary["modulus_skipped"] = skipped;
  summary["timings"] = ctx.clock.finish();
  ctx.write_json("summary.json", summary);
  *ctx.log << "Aubry set: " << A.size() << " points (epsilon " << eps << ")\n";
  return kOk;
}

inline int cmd_flow(Context& ctx) {
  const RunConfig& c = ctx.config;
  ctx.clock.stage("ferromagnetic");
  const double radius = 4.0 + 2.0 * norm(c.flow.start.v);
  const FerromagneticReport fm = check_ferromagnetic(ctx.model, radius, 1e6);
  if (!fm.is_ferromagnetic) throw DomainError("model is not ferromagnetic on the velocity box");

  std::vector<double> taus = c.flow.taus;
  if (taus.empty()) taus = c.taus.empty() ? std::vector<double>{c.single_tau()} : c.taus;
  const int dim = ctx.model.dimension();
  PhaseState start = c.flow.start;
  start.x = wrap_unit(ctx.model.project(start.x));
  start.v = ctx.model.project(start.v);

  ctx.clock.stage("orbits");
  std::string table = "tau,max_defect,ratio\n";
  json per_tau = json::array();
  std::vector<double> maxima;
  PseudoOrbitReport first;
  for (std::size_t i = 0; i < taus.size(); ++i) {
    PseudoOrbitReport r = pseudo_orbit_defect(ctx.model, taus[i], start, c.flow.steps);
    const double ratio = i > 0 && r.max_defect > 0.0 ? maxima.back() / r.max_defect : 0.0;
    table += io::num(taus[i]) + "," + io::num(r.max_defect) + "," + (i > 0 ? io::num(ratio) : std::string()) + "\n";
    per_tau.push_back({{"tau", taus[i]}, {"max_defect", r.max_defect}, {"ratio", i > 0 ? json(ratio) : json(nullptr)}});
    maxima.push_back(r.max_defect);
    if (i == 0) first = std::move(r);
  }
  const auto discrete = discrete_orbit(ctx.model, taus.front(), start, c.flow.steps);
  json energy = nullptr;
  if (ctx.model.is_separable()) {
    const double e0 = mechanical_energy(ctx.model, start);
    double drift = 0.0;
    for (const auto& z : discrete) drift = std::max(drift, std::abs(mechanical_energy(ctx.model, z) - e0));
    energy = {{"initial", e0}, {"max_deviation_discrete", drift}};
  }

  ctx.clock.stage("write");
  ctx.write("defects.csv", table);
  ctx.write("orbit.csv", io::orbit_csv(first.samples, first.defects, dim));
  ctx.write("discrete_orbit.csv", io::orbit_csv(discrete, {}, dim));
  if (dim == 1) {
    svg::Plot p = phase_plot("phase portrait, tau = " + io::num(taus.front()), 1);
    p.series.push_back(phase_series("flow samples", first.samples, 1, 0));
    p.series.push_back(phase_series("discrete Euler-Lagrange orbit", discrete, 1, 1));
    ctx.write("phase.svg", svg::render(p));
  }
  json summary = base_summary(ctx, "flow");
  summary["ferromagnetic"] = {{"beta_estimate", fm.beta_estimate}, {"velocity_radius", radius}};
  summary["pseudo_orbit"] = per_tau;
  summary["observed_order"] = taus.size() >= 2 ? json(log_log_slope(taus, maxima)) : json(nullptr);
  summary["energy"] = energy;
  summary["residual"] = 0.0;  // no fixed-point solve in this subcommand
  summary["timings"] = ctx.clock.finish();
  ctx.write_json("summary.json", summary);
  *ctx.log << "max pseudo-orbit defect at tau = " << taus.front() << ": " << maxima.front() << "\n";
  return kOk;
}

inline int cmd_select(Context& ctx) {
  const double tau = ctx.config.single_tau();
  SingleSolve s = single_solve(ctx, tau);
  const EdgeGraph& g = *s.graph;
  ctx.clock.stage("select");
  SolveOptions so;
  so.method = ctx.config.method;
  const Penalty psi = ctx.config.penalty;
  const PenalizedSelection sel = penalized_mather(g, psi, ctx.config.epsilon_pen, so);
  ctx.clock.stage("write");
  ctx.write("measure.csv", io::measure_csv(g, sel.measure));
  ctx.write("support.csv", io::phase_set_csv(sel.support));
  svg::Plot p = phase_plot("penalized Mather support", g.grid().dimension());
  p.series.push_back(phase_series("support", sel.support.points, g.grid().dimension(), 1));
  ctx.write("support.svg", svg::render(p));
  json pts = json::array();
  for (const auto& q : sel.support.points) pts.push_back({{"x", {q.x[0], q.x[1]}}, {"v", {q.v[0], q.v[1]}}});
  json summary = base_summary(ctx, "select");
  summary["graph"] = graph_summary(s);
  summary["lambda"] = s.solution.lambda;
  summary["bar_L"] = s.solution.bar_L;
  summary["residual"] = s.solution.residual;
  summary["penalized_lambda"] = sel.penalized_lambda;
  summary["penalized_residual"] = sel.solution.residual;
  summary["epsilon_pen"] = ctx.config.epsilon_pen;
  summary["support"] = pts;
  summary["timings"] = ctx.clock.finish();
  ctx.write_json("summary.json", summary);
  *ctx.log << "selected support: " << sel.support.size() << " points\n";
  return kOk;
}

inline int cmd_sweep(Context& ctx) {
  const RunConfig& c = ctx.config;
  if (c.taus.size() < 3)
    throw ConfigError("sweep needs at least 3 values in time.taus for the Kuratowski report, got " +
                      std::to_string(c.taus.size()));
  ctx.clock.stage("reference");
  SweepPlan plan;
  plan.model = ctx.model;
  plan.taus = c.taus;
  if (c.N) plan.coupling.fixed_N = c.N;
  plan.coupling.c_h = c.coupling.c_h;
  plan.user_D = c.D;
  plan.D_safety = c.D_safety;
  plan.aubry_epsilon = c.aubry_epsilon;
  plan.mather_epsilon = c.mather_epsilon;
  plan.reference = build_reference(c, ctx.model);
  plan.method = c.method;
  plan.build.max_edges = c.max_edges;
  plan.keep_sets = true;

  ctx.clock.stage("sweep");
  const SweepReport report = tau_sweep(plan);
  const KuratowskiReport kur = kuratowski_report(report);

  ctx.clock.stage("write");
  ctx.write("report.csv", io::sweep_csv(report));
  svg::Plot p;
  p.title = "one-sided Hausdorff excesses";
  p.x_label = "tau";
  p.y_label = "excess";
  p.log_x = p.log_y = true;
  const std::vector<std::pair<std::string, double SweepRow::*>> cols{
      {"e(A_tau -> A)", &SweepRow::e_aubry_to_ref},   {"e(A -> A_tau)", &SweepRow::e_ref_to_aubry},
      {"e(M_tau -> M)", &SweepRow::e_mather_to_ref},  {"e(M -> M_tau)", &SweepRow::e_ref_to_mather},
      {"|bar L + alpha|", &SweepRow::alpha_gap}};
  for (std::size_t k = 0; k < cols.size(); ++k) {
    svg::Series s;
    s.label = cols[k].first;
    s.color = svg::palette()[k];
    for (const auto& row : report.rows)
      if (row.ok()) {
        s.x.push_back(row.tau);
        s.y.push_back(row.*(cols[k].second));
      }
    p.series.push_back(s);
  }
  ctx.write("trends.svg", svg::render(p));
  double max_residual = 0.0;
  json timings_rows = json::array();
  for (std::size_t i = 0; i < report.rows.size(); ++i) {
    const SweepRow& row = report.rows[i];
    timings_rows.push_back(row.runtime_s);
    if (!row.ok()) continue;
    max_residual = std::max(max_residual, row.residual);
    const std::string dir = "rows/" + std::to_string(i);
    ctx.write(dir + "/aubry.csv", io::phase_set_csv(row.aubry));
    ctx.write(dir + "/mather.csv", io::phase_set_csv(row.mather));
  }
  std::size_t failures = 0;
  for (const auto& row : report.rows) failures += row.ok() ? 0 : 1;
  json summary = base_summary(ctx, "sweep");
  summary["alpha"] = report.alpha;
  summary["rows"] = report.rows.size();
  summary["failed_rows"] = failures;
  summary["residual"] = max_residual;
  summary["kuratowski"] = io::kuratowski_json(kur);
  json timings = ctx.clock.finish();
  timings["rows"] = timings_rows;
  summary["timings"] = timings;
  ctx.write_json("summary.json", summary);
  *ctx.log << "sweep: " << report.rows.size() << " rows, Aubry limsup " << (kur.aubry_limsup ? "yes" : "no")
           << ", liminf " << (kur.aubry_liminf ? "yes" : "no") << "\n";
  return kOk;
}

/// Entry point shared by the executable and the tests.
inline int run(const std::vector<std::string>& args, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"semi-discrete weak KAM solver for Tonelli Lagrangians on the torus", "weakkam"};
  app.set_version_flag("--version", kToolVersion);
  app.require_subcommand(1);
  std::string config_path, out_dir;
  std::optional<std::uint64_t> seed;
  unsigned threads = 0;
  const std::vector<std::pair<const char*, const char*>> commands{
      {"solve", "ergodic constant and weak KAM solution"},
      {"mather", "optimal measure and discrete Mather set"},
      {"aubry", "defect field, discrete Aubry set, witness and modulus table"},
      {"flow", "discrete Euler-Lagrange orbits and pseudo-orbit defects"},
      {"select", "penalized selection of a Mather measure"},
      {"sweep", "tau sweep with Kuratowski trend report"}};
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config_path, "TOML or JSON run configuration")->required();
    sub->add_option("--out", out_dir, "output directory (default runs/<config hash>)");
    sub->add_option("--seed", seed, "seed for randomized diagnostics");
    sub->add_option("--threads", threads, "worker thread cap (default: all cores)");
  }
  if (!args.empty() && !args.front().empty() && args.front()[0] != '-' &&
      std::none_of(commands.begin(), commands.end(), [&](const auto& c) { return args.front() == c.first; })) {
    err << "error: unknown subcommand '" << args.front() << "'\n" << app.help();
    return kUsage;
  }
  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForVersion&) {
    out << kToolVersion << "\n";
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return kUsage;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  try {
    set_max_threads(threads);
    Context ctx;
    ctx.log = &out;
    ctx.config = load_config(config_path);
    if (seed) ctx.config.seed = *seed;
    ctx.model = ctx.config.model.build();
    ctx.hash = config_hash(ctx.config);
    ctx.out = !out_dir.empty()                 ? std::filesystem::path(out_dir)
              : !ctx.config.out_dir.empty()    ? std::filesystem::path(ctx.config.out_dir)
                                               : std::filesystem::path("runs") / ctx.hash;
    std::filesystem::create_directories(ctx.out);
    if (command == "solve") return cmd_solve(ctx);
    if (command == "mather") return cmd_mather(ctx);
    if (command == "aubry") return cmd_aubry(ctx);
    if (command == "flow") return cmd_flow(ctx);
    if (command == "select") return cmd_select(ctx);
    return cmd_sweep(ctx);
  } catch (const SolverError& e) {
    err << "solver error: " << e.what() << "\n";
    return kSolverError;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kConfigError;
  }
}

inline int run(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args);
}

}  // namespace weakkam::cli
