#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "weakkam/all.hpp"

using namespace weakkam;

TEST(DiscreteStep, Examples) {
  const auto f = models::free_particle();
  const auto s = discrete_el_step(f, 0.1, PhasePoint{Vec2{0.3}, Vec2{2.0}});
  EXPECT_NEAR(s.x[0], 0.5, 1e-15);
  EXPECT_EQ(s.v[0], 2.0);

  const auto p = models::pendulum();
  const auto q = discrete_el_step(p, 0.1, PhasePoint{Vec2{0.25}, Vec2{0.0}});
  EXPECT_EQ(q.x[0], 0.25);
  EXPECT_NEAR(q.v[0], 0.62831853071795865, 1e-15);
  const auto n = discrete_el_step_newton(p, 0.1, PhasePoint{Vec2{0.25}, Vec2{0.0}});
  EXPECT_NEAR(n.v[0], q.v[0], 1e-12);

  const auto e = discrete_el_step(p, 0.1, PhasePoint{Vec2{0.0}, Vec2{0.0}});
  EXPECT_EQ(e.x[0], 0.0);
  EXPECT_NEAR(e.v[0], 0.0, 1e-15);
}

TEST(DiscreteStep, ClosedFormMatchesNewton) {
  const std::vector<LagrangianModel> ms{
      models::pendulum(), models::double_well(),
      LagrangianModel::separable(2, Mat2{{1.0, 0.3, 0.3, 2.0}}, {{1.0, {1, 0}, 0.0}, {0.7, {1, -1}, 0.5}})};
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> ux(0.0, 1.0), uv(-3.0, 3.0);
  for (const auto& m : ms)
    for (int i = 0; i < 1000; ++i) {
      const bool two = m.dimension() == 2;
      const PhasePoint s{Vec2{ux(rng), two ? ux(rng) : 0.0}, Vec2{uv(rng), two ? uv(rng) : 0.0}};
      const auto a = discrete_el_step(m, 0.05, s);
      const auto b = discrete_el_step_newton(m, 0.05, s);
      EXPECT_EQ(a.x, wrap_unit(s.x + 0.05 * s.v));
      EXPECT_LE(norm(a.v - b.v), 1e-10);
      EXPECT_EQ(a.x, b.x);
    }
}

TEST(DiscreteStep, GenericModelUsesNewton) {
  // L = 1/2 v^2 + 0.3 sin(2 pi x) v - cos(2 pi x)
  GenericCallbacks cb;
  cb.lagrangian = [](Vec2 x, Vec2 v) {
    return 0.5 * v[0] * v[0] + 0.3 * std::sin(kTwoPi * x[0]) * v[0] - std::cos(kTwoPi * x[0]);
  };
  cb.grad_x = [](Vec2 x, Vec2 v) {
    return Vec2{0.3 * kTwoPi * std::cos(kTwoPi * x[0]) * v[0] + kTwoPi * std::sin(kTwoPi * x[0])};
  };
  cb.grad_v = [](Vec2 x, Vec2 v) { return Vec2{v[0] + 0.3 * std::sin(kTwoPi * x[0])}; };
  cb.mixed = [](Vec2 x, Vec2) { return Mat2::diagonal(0.3 * kTwoPi * std::cos(kTwoPi * x[0]), 0.0); };
  const auto m = LagrangianModel::generic(1, cb);
  const double tau = 0.05;
  const PhasePoint s{Vec2{0.2}, Vec2{0.7}};
  const auto r = discrete_el_step(m, tau, s);
  const Vec2 y = r.x;
  const double residual = eval_gradients(m, s.x, s.v).dv[0] + tau * eval_gradients(m, y, r.v).dx[0] -
                          eval_gradients(m, y, r.v).dv[0];
  EXPECT_LE(std::abs(residual), 1e-11);
}

TEST(ContinuousFlow, Examples) {
  const auto f = models::free_particle();
  const auto a = continuous_flow_reference(f, PhasePoint{Vec2{0.1}, Vec2{0.7}}, 2.0, 0.1);
  EXPECT_NEAR(a.x[0], 0.5, 1e-12);
  EXPECT_NEAR(a.v[0], 0.7, 1e-12);
  const auto p = models::pendulum();
  const auto b = continuous_flow_reference(p, PhasePoint{Vec2{0.0}, Vec2{0.0}}, 3.0, 0.1);
  EXPECT_EQ(b.x[0], 0.0);
  EXPECT_EQ(b.v[0], 0.0);
  EXPECT_THROW(continuous_flow_reference(p, PhasePoint{Vec2{0.0}, Vec2{0.0}}, 1.0, 0.0), DomainError);
}

TEST(ContinuousFlow, PendulumEnergyConserved) {
  const auto p = models::pendulum();
  const PhasePoint s{Vec2{0.3}, Vec2{0.5}};
  const double e0 = mechanical_energy(p, s);
  PhasePoint z = s;
  for (int i = 0; i < 100; ++i) {
    z = continuous_flow_reference(p, z, 0.1, 0.01);
    EXPECT_NEAR(mechanical_energy(p, z), e0, 1e-8);
  }
}

TEST(DiscreteOrbit, SymplecticEnergyStaysNearInitial) {
  const auto p = models::pendulum();
  for (double tau : {0.05, 0.025}) {
    const PhasePoint s{Vec2{0.3}, Vec2{0.5}};
    const auto orbit = discrete_orbit(p, tau, s, 1000);
    const double e0 = mechanical_energy(p, s);
    double drift = 0.0;
    for (const auto& z : orbit) drift = std::max(drift, std::abs(mechanical_energy(p, z) - e0));
    // first-order energy error of symplectic Euler: |V'| |v| tau / 2 <= 2 pi * 2 * tau / 2
    EXPECT_LE(drift, 2.0 * kTwoPi * tau);
  }
}

TEST(PseudoOrbit, FreeModelIsExact) {
  EXPECT_LE(pseudo_orbit_defect(models::free_particle(), 0.1, PhasePoint{Vec2{0.1}, Vec2{1.3}}, 50).max_defect,
            1e-12);
}

TEST(PseudoOrbit, SecondOrderConsistency) {
  const auto p = models::pendulum();
  const PhasePoint s{Vec2{0.25}, Vec2{0.0}};
  std::vector<double> taus{0.1, 0.05, 0.025, 0.0125}, d;
  for (double tau : taus) d.push_back(pseudo_orbit_defect(p, tau, s, 50).max_defect);
  for (std::size_t i = 0; i + 1 < d.size(); ++i) {
    EXPECT_GE(d[i] / d[i + 1], 3.6);
    EXPECT_LE(d[i] / d[i + 1], 4.4);
  }
  EXPECT_GE(log_log_slope(taus, d), 1.9);
}

TEST(PseudoOrbit, FixedHorizonShrinks) {
  const auto p = models::pendulum();
  double prev = std::numeric_limits<double>::infinity();
  for (int k = 0; k < 4; ++k) {
    const double tau = 0.1 / (1 << k);
    const double d = pseudo_orbit_defect(p, tau, PhasePoint{Vec2{0.4}, Vec2{0.3}}, 20 << k).max_defect;
    EXPECT_LT(d, prev);
    prev = d;
  }
}

TEST(CalibratedCurve, Residuals) {
  const auto g = build_edge_graph(build_grid(1, 64), models::pendulum(), 0.1, VelocityBound::user(3.0));
  const auto s = solve_weak_kam(g);
  const auto c = backward_calibrated_configuration(s, g, 0, 30);
  EXPECT_NEAR(calibrated_curve_residual(c, g, s.u, 1.0), 0.0, 1e-12);
  EXPECT_NEAR(calibrated_curve_residual(c, g, s.u, 1.1), 0.1 * 30 * 0.1, 1e-12);

  const auto f = build_edge_graph(build_grid(1, 32), models::free_particle(), 0.1, VelocityBound::user(2.0));
  const auto fs = solve_weak_kam(f);
  EXPECT_EQ(calibrated_curve_residual(backward_calibrated_configuration(fs, f, 5, 10), f, fs.u, 0.0), 0.0);
}
