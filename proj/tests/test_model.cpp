#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "weakkam/model.hpp"

using namespace weakkam;

namespace {

LagrangianModel mixed_model(double beta) {
  // L = 1/2 v^2 + beta x v, written on the fundamental domain
  GenericCallbacks cb;
  cb.lagrangian = [beta](Vec2 x, Vec2 v) { return 0.5 * v[0] * v[0] + beta * x[0] * v[0]; };
  cb.grad_x = [beta](Vec2, Vec2 v) { return Vec2{beta * v[0]}; };
  cb.grad_v = [beta](Vec2 x, Vec2 v) { return Vec2{v[0] + beta * x[0]}; };
  cb.mixed = [beta](Vec2, Vec2) { return Mat2::diagonal(beta, 0.0); };
  return LagrangianModel::generic(1, cb);
}

}  // namespace

TEST(Lagrangian, PendulumValues) {
  const auto m = models::pendulum();
  EXPECT_DOUBLE_EQ(eval_lagrangian(m, Vec2{0.0}, Vec2{0.0}), -1.0);
  EXPECT_NEAR(eval_lagrangian(m, Vec2{0.25}, Vec2{1.0}), 0.5, 1e-15);
  EXPECT_DOUBLE_EQ(eval_lagrangian(models::free_particle(), Vec2{0.3}, Vec2{2.0}), 2.0);
}

TEST(Lagrangian, Gradients) {
  const auto m = models::pendulum();
  const auto g = eval_gradients(m, Vec2{0.25}, Vec2{1.0});
  EXPECT_NEAR(g.dx[0], kTwoPi, 1e-14);
  EXPECT_DOUBLE_EQ(g.dv[0], 1.0);
  const auto f = eval_gradients(models::free_particle(), Vec2{0.7}, Vec2{3.0});
  EXPECT_DOUBLE_EQ(f.dx[0], 0.0);
  EXPECT_DOUBLE_EQ(f.dv[0], 3.0);
  const auto z = eval_gradients(m, Vec2{0.0}, Vec2{0.0});
  EXPECT_NEAR(z.dx[0], 0.0, 1e-15);
  EXPECT_DOUBLE_EQ(z.dv[0], 0.0);
}

TEST(Lagrangian, GradientsMatchFiniteDifferences) {
  const std::vector<LagrangianModel> ms{
      models::pendulum(), models::double_well(), models::pendulum(0.7, 0.3),
      LagrangianModel::separable(2, Mat2{{1.0, 0.2, 0.2, 2.0}},
                                 {{1.0, {1, 0}, 0.0}, {0.5, {1, 1}, 0.4}, {0.25, {0, 2}, -1.0}})};
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> ux(0.0, 1.0), uv(-3.0, 3.0);
  const double step = 1e-5;
  for (const auto& m : ms) {
    for (int trial = 0; trial < 200; ++trial) {
      Vec2 x{ux(rng), m.dimension() == 2 ? ux(rng) : 0.0};
      Vec2 v{uv(rng), m.dimension() == 2 ? uv(rng) : 0.0};
      const auto g = eval_gradients(m, x, v);
      for (int i = 0; i < m.dimension(); ++i) {
        Vec2 e{};
        e[i] = step;
        const double fdx = (eval_lagrangian(m, x + e, v) - eval_lagrangian(m, x - e, v)) / (2 * step);
        const double fdv = (eval_lagrangian(m, x, v + e) - eval_lagrangian(m, x, v - e)) / (2 * step);
        EXPECT_NEAR(g.dx[i], fdx, 1e-6 * (1.0 + std::abs(fdx)));
        EXPECT_NEAR(g.dv[i], fdv, 1e-6 * (1.0 + std::abs(fdv)));
      }
    }
  }
}

TEST(Lagrangian, NonFiniteInputIsDomainError) {
  EXPECT_THROW(eval_lagrangian(models::pendulum(), Vec2{NAN}, Vec2{0.0}), DomainError);
  EXPECT_THROW(eval_gradients(models::pendulum(), Vec2{0.0}, Vec2{INFINITY}), DomainError);
}

TEST(Lagrangian, ModelValidation) {
  EXPECT_THROW(LagrangianModel::separable(3, Mat2{}, {}), ConfigError);
  EXPECT_THROW(LagrangianModel::separable(2, Mat2::diagonal(1.0, -1.0), {}), ConfigError);
  EXPECT_THROW(LagrangianModel::separable(2, Mat2{{1.0, 0.5, 0.0, 1.0}}, {}), ConfigError);
  EXPECT_THROW(LagrangianModel::separable(1, Mat2{}, {{1.0, {1, 1}, 0.0}}), ConfigError);
  EXPECT_TRUE(velocity_monotone(models::pendulum(), 4.0));
}

TEST(DiscreteAction, Examples) {
  const auto m = models::pendulum();
  EXPECT_DOUBLE_EQ(discrete_action(m, 0.1, Vec2{0.0}, Vec2{0.0}), -0.1);
  EXPECT_NEAR(discrete_action(m, 0.1, Vec2{0.0}, Vec2{0.1}), -0.05, 1e-15);
  // across the seam: 0.1 (0.5 - cos(1.9 pi))
  EXPECT_NEAR(discrete_action(m, 0.1, Vec2{0.95}, Vec2{0.05}), -0.045105651629515357, 1e-14);
  EXPECT_THROW(discrete_action(m, 0.0, Vec2{0.0}, Vec2{0.1}), DomainError);
}

TEST(DiscreteAction, Periodicity) {
  const auto m = models::double_well();
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> u(0, 1023);
  for (int i = 0; i < 100; ++i) {
    // dyadic points so the integer shifts are exact in floating point
    const Vec2 x{u(rng) / 1024.0}, y{u(rng) / 1024.0};
    EXPECT_EQ(discrete_action(m, 0.1, x, y), discrete_action(m, 0.1, x + Vec2{2.0}, y + Vec2{-3.0}));
  }
  const auto f = models::free_particle();
  EXPECT_EQ(discrete_action(f, 0.2, Vec2{0.25}, Vec2{0.375}), discrete_action(f, 0.2, Vec2{0.5}, Vec2{0.625}));
}

TEST(Superlinearity, Constants) {
  EXPECT_NEAR(superlinearity_constants(models::free_particle(), 1.0, 4.0).C_of_K, -0.5, 1e-9);
  EXPECT_NEAR(superlinearity_constants(models::pendulum(), 1.0, 4.0).C_of_K, -1.5, 1e-9);
  EXPECT_NEAR(superlinearity_constants(models::free_particle(), 1e-6, 4.0).C_of_K, 0.0, 1e-9);
  EXPECT_THROW(superlinearity_constants(models::free_particle(), 0.0, 4.0), DomainError);
}

TEST(Superlinearity, LowerBoundHoldsOnSample) {
  const auto m = models::pendulum(0.8, 0.1);
  const auto sc = superlinearity_constants(m, 2.0, 5.0);
  for (int i = 0; i < 64; ++i)
    for (int j = -500; j <= 500; ++j) {
      const Vec2 x{i / 64.0}, v{j * 0.01};
      EXPECT_GE(eval_lagrangian(m, x, v) - 2.0 * norm(v) - sc.C_of_K, -1e-12);
    }
}

TEST(Ferromagnetic, SeparableAndGeneric) {
  const auto sep = check_ferromagnetic(models::pendulum(), 4.0, 1e-9);
  EXPECT_EQ(sep.beta_estimate, 0.0);
  EXPECT_TRUE(sep.is_ferromagnetic);
  const auto gen = check_ferromagnetic(mixed_model(5.0), 4.0, 1.0);
  EXPECT_DOUBLE_EQ(gen.beta_estimate, 5.0);
  EXPECT_FALSE(gen.is_ferromagnetic);
}
