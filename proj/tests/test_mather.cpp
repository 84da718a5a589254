#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"

using namespace weakkam;

namespace {

EdgeGraph pendulum_graph(int N, double tau, double D = 2.0) {
  return build_edge_graph(build_grid(1, N), models::pendulum(), tau, VelocityBound::user(D));
}

EdgeGraph double_well_graph() {
  return build_edge_graph(build_grid(1, 32), models::double_well(), 0.1, VelocityBound::user(2.0));
}

}  // namespace

TEST(Holonomy, Examples) {
  const EdgeGraph g(TorusGrid(1, 2), 1.0, 1.0, {{0, 0}, {1, 0}}, {2.0, 1.0, 10.0, 3.0});
  EXPECT_EQ(holonomy_defect(make_measure(1.0, {{{0, 0}, 1.0}}), g), 0.0);
  const auto two_cycle = make_measure(1.0, {{{0, 1}, 0.5}, {{1, 1}, 0.5}});
  EXPECT_EQ(holonomy_defect(two_cycle, g), 0.0);
  EXPECT_DOUBLE_EQ(discrete_action_of_measure(g, two_cycle), 2.0);
  EXPECT_EQ(holonomy_defect(make_measure(1.0, {{{0, 1}, 1.0}}), g), 1.0);
  EXPECT_THROW(holonomy_defect(make_measure(1.0, {{{0, 0}, 1.5}, {{0, 1}, -0.5}}), g), DataError);
  EXPECT_THROW(holonomy_defect(make_measure(1.0, {{{0, 0}, 0.5}}), g), DataError);
}

TEST(OptimalMeasure, FreeParticleIsUniformOverLoops) {
  const auto g = build_edge_graph(build_grid(1, 16), models::free_particle(), 0.1, VelocityBound::user(2.0));
  const auto s = solve_weak_kam(g);
  const auto m = optimal_edge_measure(g, s);
  ASSERT_EQ(m.size(), 16u);
  for (std::size_t i = 0; i < m.size(); ++i) {
    EXPECT_EQ(m.edges[i].offset, g.zero_offset());
    EXPECT_DOUBLE_EQ(m.weights[i], 1.0 / 16);
  }
  EXPECT_EQ(discrete_action_of_measure(g, m), 0.0);
}

TEST(OptimalMeasure, PendulumLoopAtMaximum) {
  const auto g = pendulum_graph(16, 0.1);
  const auto m = optimal_edge_measure(g, solve_weak_kam(g));
  ASSERT_EQ(m.size(), 1u);
  EXPECT_EQ(m.edges[0], (EdgeRef{0, g.zero_offset()}));
  EXPECT_DOUBLE_EQ(discrete_action_of_measure(g, m), -0.1);
  const auto tight = oracle::minimum_cycle_edges(g, -0.1, 1e-12);
  EXPECT_EQ(tight, (std::set<EdgeRef>{{0, g.zero_offset()}}));
}

TEST(OptimalMeasure, RandomGraphsHolonomicAndOptimal) {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 200; ++trial) {
    const auto g = oracle::random_graph(rng);
    const auto s = solve_weak_kam(g);
    const auto m = optimal_edge_measure(g, s);
    EXPECT_LE(holonomy_defect(m, g), 1e-12);
    EXPECT_NEAR(discrete_action_of_measure(g, m), s.lambda, 1e-9);
    const auto cycles = oracle::simple_cycles(g);
    for (int j = 0; j < 5; ++j) {
      const auto mix = oracle::holonomic_mixture(rng, g, cycles);
      EXPECT_LE(holonomy_defect(mix, g), 1e-12);
      EXPECT_GE(discrete_action_of_measure(g, mix), s.lambda - 1e-9);
    }
  }
}

TEST(MatherSet, UnionOfMinimumCycles) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const auto g = oracle::random_graph(rng);
    const auto s = solve_weak_kam(g);
    const auto mather = mather_set(g, s, 1e-9);
    EXPECT_EQ(oracle::edge_set(mather), oracle::minimum_cycle_edges(g, s.lambda, 1e-9));
  }
}

TEST(MatherSet, Examples) {
  const auto f = build_edge_graph(build_grid(1, 16), models::free_particle(), 0.1, VelocityBound::user(2.0));
  const auto fm = mather_set(f, solve_weak_kam(f), 1e-9);
  ASSERT_EQ(fm.size(), 16u);
  for (const auto& p : fm.points) EXPECT_EQ(p.v[0], 0.0);

  const auto g = pendulum_graph(32, 0.1);
  const auto s = solve_weak_kam(g);
  const auto pm = mather_set(g, s, 1e-9);
  ASSERT_EQ(pm.size(), 1u);
  EXPECT_EQ(pm.points[0], (PhasePoint{Vec2{0.0}, Vec2{0.0}}));

  const auto all = mather_set(g, s, std::numeric_limits<double>::infinity());
  EXPECT_EQ(all.size(), g.edge_count());
}

TEST(Cesaro, Examples) {
  const auto g = pendulum_graph(16, 0.1);
  const auto s = solve_weak_kam(g);
  const auto still = backward_calibrated_configuration(s, g, 0, 25);
  const auto m = cesaro_measure(still);
  ASSERT_EQ(m.size(), 1u);
  EXPECT_EQ(holonomy_defect(m, g), 0.0);

  CalibratedConfiguration one;
  one.tau = 0.1;
  one.nodes = {1, 0};
  one.offsets = {g.zero_offset() + 1};
  EXPECT_DOUBLE_EQ(holonomy_defect(cesaro_measure(one), g), 1.0);

  CalibratedConfiguration loop;
  loop.tau = 0.1;
  loop.nodes.push_back(0);
  for (int i = 0; i < 10; ++i) {
    loop.nodes.push_back(15);
    loop.offsets.push_back(g.zero_offset() + 1);
    loop.nodes.push_back(0);
    loop.offsets.push_back(g.zero_offset() - 1);
  }
  const auto lm = cesaro_measure(loop);
  ASSERT_EQ(lm.size(), 2u);
  EXPECT_DOUBLE_EQ(lm.weights[0], 0.5);
  EXPECT_NEAR(holonomy_defect(lm, g), 0.0, 1e-15);
}

TEST(Cesaro, DefectBoundOnCalibratedConfigurations) {
  const auto g = pendulum_graph(64, 0.1, 3.0);
  const auto s = solve_weak_kam(g);
  for (int x0 = 1; x0 < 64; x0 += 5)
    for (int n : {1, 7, 50}) {
      const auto m = cesaro_measure(backward_calibrated_configuration(s, g, x0, n));
      EXPECT_LE(holonomy_defect(m, g), 2.0 / n + 1e-12);
    }
}

TEST(Recovery, EquilibriumOrbits) {
  const auto g = pendulum_graph(32, 0.1);
  const std::vector<PhasePoint> rest(1001, PhasePoint{Vec2{0.0}, Vec2{0.0}});
  const auto r = recovery_measure(g, rest, 0.01);
  ASSERT_EQ(r.measure.size(), 1u);
  EXPECT_EQ(r.holonomy_defect, 0.0);
  EXPECT_DOUBLE_EQ(r.action_per_tau, -1.0);

  const auto f = build_edge_graph(build_grid(1, 32), models::free_particle(), 0.1, VelocityBound::user(2.0));
  const std::vector<PhasePoint> half(1001, PhasePoint{Vec2{0.5}, Vec2{0.0}});
  const auto rf = recovery_measure(f, half, 0.01);
  ASSERT_EQ(rf.measure.size(), 1u);
  EXPECT_EQ(rf.measure.edges[0], (EdgeRef{16, f.zero_offset()}));
  EXPECT_EQ(rf.action_per_tau, 0.0);
}

TEST(Recovery, NonInvariantSampleReportsDefect) {
  const auto m = models::pendulum();
  const auto g = build_edge_graph(build_grid(1, 64), m, 0.1, VelocityBound::user(8.0));
  // separatrix energy 1: start near the bottom with speed 2
  const auto orbit = sample_orbit(m, PhasePoint{Vec2{0.5}, Vec2{1.9}}, 0.01, 1001);
  const auto r = recovery_measure(g, orbit, 0.01);
  EXPECT_GT(r.holonomy_defect, 0.0);
  EXPECT_THROW(recovery_measure(g, orbit, 0.02), DomainError);
  const auto narrow = build_edge_graph(build_grid(1, 64), m, 0.1, VelocityBound::user(0.5));
  EXPECT_THROW(recovery_measure(narrow, orbit, 0.01), DataError);
}

TEST(Penalized, ZeroPenaltyReduces) {
  const auto g = double_well_graph();
  const auto s = solve_weak_kam(g);
  const auto sel = penalized_mather(g, Penalty{}, 0.0);
  EXPECT_EQ(sel.penalized_lambda, s.lambda);
  EXPECT_EQ(discrete_action_of_measure(g, sel.measure), discrete_action_of_measure(g, optimal_edge_measure(g, s)));
  ASSERT_EQ(sel.support.size(), 2u);
}

TEST(Penalized, BumpSelectsTheOtherWell) {
  const auto g = double_well_graph();
  for (double eps : {1e-1, 1e-3, 1e-6}) {
    const auto sel = penalized_mather(g, Penalty{}, eps);
    ASSERT_EQ(sel.support.size(), 1u);
    EXPECT_EQ(sel.support.points[0], (PhasePoint{Vec2{0.0}, Vec2{0.0}}));
  }
  // oracle: perturbed cycle enumeration over the nearest-neighbour stencil
  std::vector<double> costs(g.costs());
  const Penalty psi;
  for (int x = 0; x < g.node_count(); ++x)
    for (int k = 0; k < g.stencil_size(); ++k) costs[g.edge_index(x, k)] += 1e-3 * g.tau() * psi(g.phase_point({x, k}));
  const auto perturbed = g.with_costs(costs);
  const int z = perturbed.zero_offset();
  const auto cycles = oracle::simple_cycles(perturbed, [&](int, int k) { return std::abs(k - z) <= 1; });
  double best = std::numeric_limits<double>::infinity();
  std::vector<EdgeRef> arg;
  for (const auto& c : cycles) {
    const double mean = oracle::cycle_cost(perturbed, c) / static_cast<double>(c.size());
    if (mean < best) best = mean, arg = c;
  }
  EXPECT_EQ(min_mean_cycle(perturbed).lambda, best);
  EXPECT_EQ(arg, (std::vector<EdgeRef>{{0, z}}));
}

TEST(Penalized, ConstantPenaltyShiftsLambda) {
  const auto g = double_well_graph();
  Penalty one;
  one.kind = PenaltyKind::constant;
  const auto sel = penalized_mather(g, one, 0.5);
  EXPECT_NEAR(sel.penalized_lambda, solve_weak_kam(g).lambda + 0.5 * g.tau(), 1e-12);
  EXPECT_EQ(sel.support.size(), 2u);
  EXPECT_THROW(penalized_mather(g, one, -1.0), ConfigError);
}
