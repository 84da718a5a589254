#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"

using namespace weakkam;

namespace {

/// a = 0, b = 1; a->a cost 2, a->b cost 1, b->a cost 3.
EdgeGraph two_node_graph() {
  // offset 0 is the loop, offset 1 leads to the other node; the loop at b is
  // made expensive enough to stay off every optimal cycle
  std::vector<Offset> stencil{{0, 0}, {1, 0}};
  std::vector<double> costs{2.0, 1.0, 10.0, 3.0};
  return EdgeGraph(TorusGrid(1, 2), 1.0, 1.0, stencil, costs);
}

EdgeGraph pendulum_graph(int N, double tau, double D = 2.0) {
  return build_edge_graph(build_grid(1, N), models::pendulum(), tau, VelocityBound::user(D));
}

}  // namespace

TEST(MeanCycle, SelfLoop) {
  const EdgeGraph g(TorusGrid(1, 2), 1.0, 1.0, {{0, 0}}, {-5.0, -5.0});
  EXPECT_DOUBLE_EQ(min_mean_cycle(g, MeanCycleMethod::karp).lambda, -5.0);
  EXPECT_DOUBLE_EQ(min_mean_cycle(g, MeanCycleMethod::howard).lambda, -5.0);
}

TEST(MeanCycle, TwoNodes) {
  const auto g = two_node_graph();
  EXPECT_DOUBLE_EQ(oracle::brute_force_lambda(g), 2.0);
  for (auto m : {MeanCycleMethod::karp, MeanCycleMethod::howard}) {
    const auto r = min_mean_cycle(g, m);
    EXPECT_DOUBLE_EQ(r.lambda, 2.0);
    EXPECT_DOUBLE_EQ(cycle_mean(g, r.cycle), 2.0);
  }
}

TEST(MeanCycle, PendulumSelfLoopIsOptimal) {
  for (double tau : {0.2, 0.1, 0.05}) {
    const auto g = pendulum_graph(8, tau, 4.0);
    EXPECT_NEAR(oracle::brute_force_lambda(g), -tau, 1e-15);
    EXPECT_EQ(min_mean_cycle(g, MeanCycleMethod::karp).lambda, -tau);
    EXPECT_EQ(min_mean_cycle(g, MeanCycleMethod::howard).lambda, -tau);
  }
}

TEST(MeanCycle, RandomGraphsAgreeWithEnumeration) {
  std::mt19937_64 rng(20240601);
  for (int trial = 0; trial < 300; ++trial) {
    const auto g = oracle::random_graph(rng, false);
    const double brute = oracle::brute_force_lambda(g);
    const auto k = min_mean_cycle(g, MeanCycleMethod::karp);
    const auto h = min_mean_cycle(g, MeanCycleMethod::howard);
    EXPECT_NEAR(k.lambda, brute, 1e-9);
    EXPECT_NEAR(h.lambda, brute, 1e-9);
    EXPECT_NEAR(cycle_mean(g, k.cycle), brute, 1e-9);
    EXPECT_NEAR(cycle_mean(g, h.cycle), brute, 1e-9);
  }
}

TEST(WeakKam, DisconnectedGraphWithDistinctMeansIsDataError) {
  // offset 2 on 4 nodes: components {0, 2} and {1, 3}
  const EdgeGraph g(TorusGrid(1, 4), 1.0, 1.0, {{2, 0}}, {0.0, 1.0, 0.0, 1.0});
  EXPECT_DOUBLE_EQ(min_mean_cycle(g).lambda, 0.0);
  EXPECT_THROW(solve_weak_kam(g), DataError);
}

TEST(MeanCycle, RejectsNonFiniteCosts) {
  EXPECT_THROW(EdgeGraph(TorusGrid(1, 2), 1.0, 1.0, {{0, 0}}, {1.0, NAN}), DataError);
}

TEST(WeakKam, FreeParticle) {
  const auto g = build_edge_graph(build_grid(1, 32), models::free_particle(), 0.1, VelocityBound::user(2.0));
  const auto s = solve_weak_kam(g);
  EXPECT_EQ(s.lambda, 0.0);
  EXPECT_EQ(s.residual, 0.0);
  for (double u : s.u) EXPECT_EQ(u, 0.0);
  EXPECT_EQ(s.critical_nodes.size(), 32u);
}

TEST(WeakKam, PendulumMatchesValueIteration) {
  const auto g = pendulum_graph(32, 0.1);
  const auto s = solve_weak_kam(g);
  EXPECT_EQ(s.lambda, -0.1);
  EXPECT_DOUBLE_EQ(s.bar_L, -1.0);
  EXPECT_EQ(s.u[0], 0.0);
  EXPECT_LE(s.residual, 1e-9);
  const auto vi = oracle::value_iteration(g, 1e-12);
  EXPECT_NEAR(vi.lower, s.lambda, 1e-12);
  EXPECT_NEAR(vi.upper, s.lambda, 1e-12);
  const double shift = vi.u[0];
  for (std::size_t i = 0; i < s.u.size(); ++i) EXPECT_NEAR(s.u[i], vi.u[i] - shift, 1e-10);
}

TEST(WeakKam, TwoNodePotential) {
  const auto s = solve_weak_kam(two_node_graph());
  EXPECT_DOUBLE_EQ(s.lambda, 2.0);
  EXPECT_DOUBLE_EQ(s.u[0], 1.0);
  EXPECT_DOUBLE_EQ(s.u[1], 0.0);
}

TEST(WeakKam, DominationAndShiftInvariance) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    const auto g = oracle::random_graph(rng);
    const auto s = solve_weak_kam(g);
    for (int x = 0; x < g.node_count(); ++x)
      for (int k = 0; k < g.stencil_size(); ++k)
        EXPECT_GE(s.u[static_cast<std::size_t>(x)] + g.cost(x, k) - s.u[static_cast<std::size_t>(g.head(x, k))] -
                      s.lambda,
                  -1e-9);
    EXPECT_LE(s.residual, 1e-9);
    EXPECT_EQ(*std::min_element(s.u.begin(), s.u.end()), 0.0);

    std::vector<double> shifted(g.costs());
    for (double& c : shifted) c += 0.75;
    const auto t = solve_weak_kam(g.with_costs(shifted));
    EXPECT_NEAR(t.lambda, s.lambda + 0.75, 1e-9);
    if (s.potential_unique_up_to_constant()) {
      for (std::size_t i = 0; i < s.u.size(); ++i) EXPECT_NEAR(t.u[i], s.u[i], 1e-9);
    }
  }
}

TEST(WeakKam, ResidualReactsToPerturbation) {
  const auto g = pendulum_graph(32, 0.1);
  const auto s = solve_weak_kam(g);
  EXPECT_LE(lax_oleinik_residual(s, g), 1e-12);
  EXPECT_NEAR(lax_oleinik_residual(s.u, s.lambda + 0.01, g), 0.01, 1e-12);
  auto u = s.u;
  u[5] += 0.1;
  EXPECT_GE(lax_oleinik_residual(u, s.lambda, g), 0.1 - 1e-9);
}

TEST(WeakKam, CriticalComponentsOfDoubleWell) {
  const auto g = build_edge_graph(build_grid(1, 32), models::double_well(), 0.1, VelocityBound::user(2.0));
  const auto s = solve_weak_kam(g);
  EXPECT_NEAR(s.bar_L, -1.0, 1e-12);
  ASSERT_EQ(s.critical_components.size(), 2u);
  EXPECT_EQ(s.critical_components[0], std::vector<int>{0});
  EXPECT_EQ(s.critical_components[1], std::vector<int>{16});
  EXPECT_FALSE(s.potential_unique_up_to_constant());
}

TEST(CalibratedConfiguration, PendulumStaysAtMaximum) {
  const auto g = pendulum_graph(64, 0.1, 3.0);
  const auto s = solve_weak_kam(g);
  const auto c = backward_calibrated_configuration(s, g, 0, 20);
  for (int x : c.nodes) EXPECT_EQ(x, 0);
  for (double d : c.defects) EXPECT_EQ(d, 0.0);
  EXPECT_THROW(backward_calibrated_configuration(s, g, 0, 0), ConfigError);
}

TEST(CalibratedConfiguration, TelescopingAndVelocity) {
  const auto g = pendulum_graph(64, 0.1, 3.0);
  const auto s = solve_weak_kam(g);
  const auto bound = VelocityBound::user(3.0);
  for (int x0 = 0; x0 < 64; x0 += 7) {
    const auto c = backward_calibrated_configuration(s, g, x0, 40);
    double action = 0.0;
    for (int k = 0; k < c.steps(); ++k) {
      EXPECT_LE(c.defects[static_cast<std::size_t>(k)], 1e-9);
      action += g.cost(c.edge(k).node, c.edge(k).offset);
    }
    const double du = s.u[static_cast<std::size_t>(c.nodes.front())] - s.u[static_cast<std::size_t>(c.nodes.back())];
    EXPECT_NEAR(du, action - c.steps() * s.lambda, 40 * 1e-9);
    EXPECT_TRUE(velocity_check(c, bound).within_bound);
  }
}

TEST(CalibratedConfiguration, VelocityCheckOfSingleStep) {
  CalibratedConfiguration c;
  c.tau = 0.1;
  c.velocities = {Vec2{3 * (1.0 / 64) / 0.1}};
  const auto r = velocity_check(c, VelocityBound::user(1.0));
  EXPECT_DOUBLE_EQ(r.max_speed, 3 * (1.0 / 64) / 0.1);
  EXPECT_TRUE(r.within_bound);
  CalibratedConfiguration still;
  EXPECT_EQ(velocity_check(still, VelocityBound::user(1.0)).max_speed, 0.0);
}
