#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"

using namespace weakkam;

namespace {

EdgeGraph pendulum_graph(int N, double tau, double D = 2.0) {
  return build_edge_graph(build_grid(1, N), models::pendulum(), tau, VelocityBound::user(D));
}

CalibrationGraph subgraph(const std::vector<std::uint8_t>& keep) {
  CalibrationGraph c;
  c.keep = keep;
  for (auto k : keep) c.edge_count += k;
  return c;
}

}  // namespace

TEST(Defects, FreeParticle) {
  const auto g = build_edge_graph(build_grid(1, 16), models::free_particle(), 0.1, VelocityBound::user(2.0));
  const auto d = defect_field(g, solve_weak_kam(g));
  for (int x = 0; x < g.node_count(); ++x)
    for (int k = 0; k < g.stencil_size(); ++k) {
      const double v = g.velocity(k)[0];
      EXPECT_DOUBLE_EQ(d.g[g.edge_index(x, k)], 0.1 * 0.5 * v * v);
    }
  const auto exact = calibration_graph(d, 0.0);
  EXPECT_EQ(exact.edge_count, 16u);
  for (int x = 0; x < g.node_count(); ++x) EXPECT_TRUE(exact.contains(g, x, g.zero_offset()));
  EXPECT_EQ(calibration_graph(d, std::numeric_limits<double>::infinity()).edge_count, g.edge_count());
}

TEST(Defects, PendulumAndConfigurationAgree) {
  const auto g = pendulum_graph(32, 0.1);
  const auto s = solve_weak_kam(g);
  const auto d = defect_field(g, s);
  EXPECT_EQ(d.g[g.edge_index(0, g.zero_offset())], 0.0);
  EXPECT_GE(d.min_defect, -1e-9);
  EXPECT_LE(d.max_node_min, 1e-9);
  const auto c = backward_calibrated_configuration(s, g, 9, 12);
  for (int k = 0; k < c.steps(); ++k) EXPECT_EQ(d.g[g.edge_index(c.edge(k))], c.defects[static_cast<std::size_t>(k)]);
}

TEST(Defects, DominationViolationIsSolverError) {
  const auto g = pendulum_graph(16, 0.1);
  auto s = solve_weak_kam(g);
  s.u[3] += 1.0;
  EXPECT_THROW(defect_field(g, s), SolverError);
}

TEST(AubrySet, Examples) {
  const auto f = build_edge_graph(build_grid(1, 16), models::free_particle(), 0.1, VelocityBound::user(2.0));
  const auto fa = aubry_set(f, calibration_graph(defect_field(f, solve_weak_kam(f)), 1e-9));
  ASSERT_EQ(fa.size(), 16u);
  for (const auto& p : fa.points) EXPECT_EQ(p.v[0], 0.0);

  const auto g = pendulum_graph(16, 0.1);
  const auto pa = aubry_set(g, calibration_graph(defect_field(g, solve_weak_kam(g)), 1e-9));
  ASSERT_EQ(pa.size(), 1u);
  EXPECT_EQ(pa.points[0], (PhasePoint{Vec2{0.0}, Vec2{0.0}}));
}

TEST(AubrySet, DanglingEdgeExcluded) {
  // nodes a = 0, b = 1 on a 3-node ring; keep a->a and a->b only
  const EdgeGraph g(TorusGrid(1, 3), 1.0, 1.0, {{0, 0}, {1, 0}}, std::vector<double>(6, 0.0));
  std::vector<std::uint8_t> keep(6, 0);
  keep[g.edge_index(0, 0)] = 1;
  keep[g.edge_index(0, 1)] = 1;
  const auto a = aubry_set(g, subgraph(keep));
  EXPECT_EQ(a.edges, (std::vector<EdgeRef>{{0, 0}}));
  EXPECT_THROW(aubry_witness(g, subgraph(keep), {0, 1}), DataError);

  const auto empty = aubry_set(g, subgraph(std::vector<std::uint8_t>(6, 0)));
  EXPECT_TRUE(empty.empty());
  EXPECT_EQ(empty.warnings.size(), 1u);
}

TEST(AubrySet, BruteForceOnRandomSubgraphs) {
  std::mt19937_64 rng(404);
  std::bernoulli_distribution coin(0.5);
  for (int trial = 0; trial < 300; ++trial) {
    const auto g = oracle::random_graph(rng, false);
    std::vector<std::uint8_t> keep(g.edge_count());
    for (auto& k : keep) k = coin(rng) ? 1 : 0;
    const auto cal = subgraph(keep);
    const auto a = aubry_set(g, cal);
    const auto brute = oracle::bi_infinite_edges(g, [&](int x, int k) { return cal.contains(g, x, k); });
    EXPECT_EQ(oracle::edge_set(a), brute);
  }
}

TEST(AubrySet, ContainsMatherAndIsMonotone) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> eps(0.0, 0.6);
  for (int trial = 0; trial < 200; ++trial) {
    const auto g = oracle::random_graph(rng);
    const auto s = solve_weak_kam(g);
    const auto d = defect_field(g, s);
    double e1 = eps(rng), e2 = eps(rng);
    if (e1 > e2) std::swap(e1, e2);
    const auto a1 = aubry_set(g, calibration_graph(d, e1));
    const auto a2 = aubry_set(g, calibration_graph(d, e2));
    EXPECT_TRUE(is_subset(mather_set(g, d, e1), a1));
    EXPECT_TRUE(is_subset(a1, a2));
  }
}

TEST(AubryWitnessTest, TelescopesWithinEpsilon) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 100; ++trial) {
    const auto g = oracle::random_graph(rng);
    const auto d = defect_field(g, solve_weak_kam(g));
    const double eps = 0.3;
    const auto cal = calibration_graph(d, eps);
    for (const auto& e : aubry_set(g, cal).edges) {
      const auto w = aubry_witness(g, cal, e);
      ASSERT_FALSE(w.backward_cycle.empty());
      ASSERT_FALSE(w.forward_cycle.empty());
      // consecutive edges chain, cycles close up
      auto chained = [&](const std::vector<EdgeRef>& p) {
        for (std::size_t i = 0; i + 1 < p.size(); ++i)
          if (g.head(p[i].node, p[i].offset) != p[i + 1].node) return false;
        return true;
      };
      std::vector<EdgeRef> full(w.backward_cycle);
      const auto path = w.path();
      full.insert(full.end(), path.begin(), path.end());
      full.insert(full.end(), w.forward_cycle.begin(), w.forward_cycle.end());
      EXPECT_TRUE(chained(full));
      EXPECT_EQ(g.head(w.backward_cycle.back().node, w.backward_cycle.back().offset), w.backward_cycle.front().node);
      EXPECT_EQ(g.head(w.forward_cycle.back().node, w.forward_cycle.back().offset), w.forward_cycle.front().node);
      double total = 0.0;
      for (const auto& p : full) {
        EXPECT_TRUE(cal.contains(g, p.node, p.offset));
        total += d.g[g.edge_index(p)];
      }
      EXPECT_LE(total, static_cast<double>(full.size()) * eps + 1e-12);
    }
  }
}

TEST(NearbyAubry, ConstantOrbitAtAubryPoint) {
  const auto g = pendulum_graph(64, 0.1);
  const auto d = defect_field(g, solve_weak_kam(g));
  const auto a = aubry_set(g, calibration_graph(d, 1e-9));
  const std::vector<PhasePoint> orbit(5, PhasePoint{Vec2{0.0}, Vec2{0.0}});
  const auto r = nearby_aubry_distance(g, orbit, d, a);
  EXPECT_EQ(r.eta, 0.0);
  EXPECT_EQ(r.dist, 0.0);
}

TEST(NearbyAubry, EmpiricalModulusBoundsSamples) {
  const auto m = models::pendulum();
  const auto g = build_edge_graph(build_grid(1, 64), m, 0.1, VelocityBound::user(3.0));
  const auto d = defect_field(g, solve_weak_kam(g));
  const auto a = aubry_set(g, calibration_graph(d, 1e-9));
  double max_g = 0.0;
  for (double v : d.g) max_g = std::max(max_g, v);
  std::vector<NearbyAubry> samples;
  for (int i = 1; i <= 12; ++i) {
    const auto orbit = discrete_orbit(m, 0.1, PhasePoint{Vec2{0.002 * i}, Vec2{0.0}}, 6);
    samples.push_back(nearby_aubry_distance(g, orbit, d, a));
    EXPECT_LE(samples.back().eta, max_g);
  }
  const EmpiricalModulus omega(samples);
  for (const auto& s : samples) EXPECT_LE(s.dist, omega(s.eta));
  for (std::size_t i = 1; i < omega.table().size(); ++i) EXPECT_GE(omega.table()[i].dist, omega.table()[i - 1].dist);
  EXPECT_THROW(project_to_edge(g, PhasePoint{Vec2{0.0}, Vec2{50.0}}), DataError);
}
