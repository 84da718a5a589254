#pragma once

// Tonelli Lagrangians on the flat torus T^d (d = 1, 2).
//
// Two forms are supported. The separable (mechanical) form
//     L(x, v) = 1/2 v^T M v - V(x),   V(x) = sum_j a_j cos(2 pi k_j . x + phi_j)
// has exact derivatives. The generic form wraps user callbacks and is
// cross-checked against finite differences.

#include <cmath>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "weakkam/error.hpp"
#include "weakkam/geometry.hpp"

namespace weakkam {

/// One term a cos(2 pi k.x + phase) of a trigonometric potential.
struct TrigTerm {
  double amplitude = 0.0;
  Offset frequency{0, 0};
  double phase = 0.0;  // radians
};

/// Callbacks for a non-separable Lagrangian. `mixed` returns d^2L/dx dv with
/// entry (i, j) = d^2 L / dx_i dv_j.
struct GenericCallbacks {
  std::function<double(Vec2, Vec2)> lagrangian;
  std::function<Vec2(Vec2, Vec2)> grad_x;
  std::function<Vec2(Vec2, Vec2)> grad_v;
  std::function<Mat2(Vec2, Vec2)> mixed;
};

enum class ModelForm { separable, generic };

struct Gradients {
  Vec2 dx;  // dL/dx
  Vec2 dv;  // dL/dv
};

class LagrangianModel {
 public:
  static LagrangianModel separable(int dimension, Mat2 mass, std::vector<TrigTerm> potential) {
    check_dimension(dimension);
    if (dimension == 1) {
      if (mass(0, 1) != 0.0 || mass(1, 0) != 0.0)
        throw ConfigError("one-dimensional mass matrix must be 1x1");
      mass(1, 1) = 1.0;  // unused padding; keeps M invertible
      for (const auto& t : potential)
        if (t.frequency[1] != 0) throw ConfigError("one-dimensional potential term has a second frequency");
    }
    if (std::abs(mass(0, 1) - mass(1, 0)) > 1e-12 * (1.0 + std::abs(mass(0, 1))))
      throw ConfigError("mass matrix must be symmetric");
    for (double e : mass.a)
      if (!std::isfinite(e)) throw ConfigError("mass matrix has non-finite entries");
    if (symmetric_eigenvalues(mass)[0] <= 0.0) throw ConfigError("mass matrix must be positive definite");
    for (const auto& t : potential)
      if (!std::isfinite(t.amplitude) || !std::isfinite(t.phase))
        throw ConfigError("potential term has non-finite amplitude or phase");

    LagrangianModel m;
    m.dimension_ = dimension;
    m.form_ = ModelForm::separable;
    m.mass_ = mass;
    m.inverse_mass_ = mass.inverse();
    m.potential_ = std::move(potential);
    return m;
  }

  static LagrangianModel generic(int dimension, GenericCallbacks callbacks) {
    check_dimension(dimension);
    if (!callbacks.lagrangian || !callbacks.grad_x || !callbacks.grad_v || !callbacks.mixed)
      throw ConfigError("generic model requires all four callbacks");
    LagrangianModel m;
    m.dimension_ = dimension;
    m.form_ = ModelForm::generic;
    m.callbacks_ = std::move(callbacks);
    return m;
  }

  int dimension() const { return dimension_; }
  ModelForm form() const { return form_; }
  bool is_separable() const { return form_ == ModelForm::separable; }

  const Mat2& mass() const { return mass_; }
  const Mat2& inverse_mass() const { return inverse_mass_; }
  std::span<const TrigTerm> potential_terms() const { return potential_; }
  const GenericCallbacks& callbacks() const { return callbacks_; }

  /// V(x); zero for generic models.
  double potential(const Vec2& x) const {
    const Vec2 p = wrap_unit(x);
    double sum = 0.0;
    for (const auto& t : potential_)
      sum += t.amplitude * std::cos(kTwoPi * (t.frequency[0] * p[0] + t.frequency[1] * p[1]) + t.phase);
    return sum;
  }

  Vec2 potential_gradient(const Vec2& x) const {
    const Vec2 p = wrap_unit(x);
    Vec2 g;
    for (const auto& t : potential_) {
      const double s =
          -t.amplitude * kTwoPi * std::sin(kTwoPi * (t.frequency[0] * p[0] + t.frequency[1] * p[1]) + t.phase);
      g[0] += s * t.frequency[0];
      g[1] += s * t.frequency[1];
    }
    return g;
  }

  /// Drops the second component for d = 1 so callbacks cannot leak into it.
  Vec2 project(Vec2 w) const {
    if (dimension_ == 1) w[1] = 0.0;
    return w;
  }

 private:
  LagrangianModel() = default;

  static void check_dimension(int d) {
    if (d != 1 && d != 2) throw ConfigError("dimension must be 1 or 2, got " + std::to_string(d));
  }

  int dimension_ = 1;
  ModelForm form_ = ModelForm::separable;
  Mat2 mass_{};
  Mat2 inverse_mass_{};
  std::vector<TrigTerm> potential_;
  GenericCallbacks callbacks_;
};

namespace detail {
inline void require_finite(const Vec2& x, const Vec2& v) {
  if (!is_finite(x) || !is_finite(v)) throw DomainError("non-finite phase-space input");
}
}  // namespace detail

inline double eval_lagrangian(const LagrangianModel& model, const Vec2& x, const Vec2& v) {
  detail::require_finite(x, v);
  if (model.is_separable()) {
    const Vec2 w = model.project(v);
    return 0.5 * dot(w, model.mass() * w) - model.potential(x);
  }
  return model.callbacks().lagrangian(wrap_unit(x), model.project(v));
}

inline Gradients eval_gradients(const LagrangianModel& model, const Vec2& x, const Vec2& v) {
  detail::require_finite(x, v);
  if (model.is_separable()) {
    const Vec2 w = model.project(v);
    return {-model.potential_gradient(x), model.mass() * w};
  }
  const auto& cb = model.callbacks();
  const Vec2 p = wrap_unit(x), w = model.project(v);
  return {model.project(cb.grad_x(p, w)), model.project(cb.grad_v(p, w))};
}

/// d^2L / dx dv; identically zero for separable models.
inline Mat2 eval_mixed_derivative(const LagrangianModel& model, const Vec2& x, const Vec2& v) {
  detail::require_finite(x, v);
  if (model.is_separable()) return Mat2::zero();
  Mat2 m = model.callbacks().mixed(wrap_unit(x), model.project(v));
  if (model.dimension() == 1) m = Mat2{{m(0, 0), 0.0, 0.0, 0.0}};
  return m;
}

/// d^2L / dv^2: M for separable models, central differences of dL/dv otherwise.
inline Mat2 eval_velocity_hessian(const LagrangianModel& model, const Vec2& x, const Vec2& v) {
  if (model.is_separable()) return model.mass();
  constexpr double step = 1e-6;
  Mat2 h = Mat2::zero();
  for (int j = 0; j < model.dimension(); ++j) {
    Vec2 e;
    e[static_cast<std::size_t>(j)] = step;
    const Vec2 col = (eval_gradients(model, x, v + e).dv - eval_gradients(model, x, v - e).dv) / (2.0 * step);
    h(0, j) = col[0];
    h(1, j) = col[1];
  }
  if (model.dimension() == 1) h(1, 1) = 1.0;
  return h;
}

/// Discrete action tau * L(x, (y - x)/tau) with y - x the minimal torus representative.
inline double discrete_action(const LagrangianModel& model, double tau, const Vec2& x, const Vec2& y) {
  if (!(tau > 0.0) || !std::isfinite(tau)) throw DomainError("time step must be positive");
  detail::require_finite(x, y);
  const Vec2 delta = model.project(torus_displacement(wrap_unit(x), wrap_unit(y)));
  return tau * eval_lagrangian(model, wrap_unit(x), delta / tau);
}

/// Sampling density used by the certified-on-a-box estimates below.
struct SampleResolution {
  int x_per_axis = 64;
  int v_per_radius = 1000;  // velocity samples per unit of radius along each axis half-line
};

struct SuperlinearityConstants {
  double K = 0.0;
  double C_of_K = 0.0;  // min of L(x,v) - K|v| over the sample
  double R_v = 0.0;
  double x_step = 0.0;
  double v_step = 0.0;
};

namespace detail {
inline std::vector<Vec2> torus_samples(int dimension, int per_axis) {
  std::vector<Vec2> xs;
  const double h = 1.0 / per_axis;
  if (dimension == 1) {
    for (int i = 0; i < per_axis; ++i) xs.emplace_back(i * h);
  } else {
    for (int i = 0; i < per_axis; ++i)
      for (int j = 0; j < per_axis; ++j) xs.emplace_back(i * h, j * h);
  }
  return xs;
}

/// Velocity lattice inside the closed ball of radius R (box for d = 1).
inline std::vector<Vec2> velocity_samples(int dimension, double radius, int half_count) {
  std::vector<Vec2> vs;
  const double step = radius / half_count;
  if (dimension == 1) {
    for (int i = -half_count; i <= half_count; ++i) vs.emplace_back(i * step);
  } else {
    for (int i = -half_count; i <= half_count; ++i)
      for (int j = -half_count; j <= half_count; ++j)
        if (i * i + j * j <= half_count * half_count) vs.emplace_back(i * step, j * step);
  }
  return vs;
}
}  // namespace detail

/// Estimates C(K) = min L(x,v) - K|v| over a lattice of T^d x {|v| <= R_v}.
/// The bound is certified on the box only.
inline SuperlinearityConstants superlinearity_constants(const LagrangianModel& model, double K, double R_v,
                                                        SampleResolution res = {}) {
  if (!(K > 0.0) || !(R_v > 0.0) || !std::isfinite(K) || !std::isfinite(R_v))
    throw DomainError("superlinearity constants need K > 0 and R_v > 0");
  const int d = model.dimension();
  const int x_axis = d == 1 ? res.x_per_axis : std::max(1, res.x_per_axis / 2);
  const int v_half = d == 1 ? static_cast<int>(std::ceil(res.v_per_radius * R_v))
                            : std::max(1, static_cast<int>(std::ceil(res.v_per_radius * R_v / 10.0)));
  if (x_axis <= 0 || v_half <= 0) throw DomainError("empty superlinearity sample");
  const auto xs = detail::torus_samples(d, x_axis);
  const auto vs = detail::velocity_samples(d, R_v, v_half);
  if (xs.empty() || vs.empty()) throw DomainError("empty superlinearity sample");

  double best = std::numeric_limits<double>::infinity();
  if (model.is_separable()) {
    // min over the product splits into kinetic and potential parts
    double kinetic = std::numeric_limits<double>::infinity();
    for (const auto& v : vs) kinetic = std::min(kinetic, 0.5 * dot(v, model.mass() * v) - K * norm(v));
    double vmax = -std::numeric_limits<double>::infinity();
    for (const auto& x : xs) vmax = std::max(vmax, model.potential(x));
    best = kinetic - vmax;
  } else {
    for (const auto& x : xs)
      for (const auto& v : vs) best = std::min(best, eval_lagrangian(model, x, v) - K * norm(v));
  }
  return {K, best, R_v, 1.0 / x_axis, R_v / v_half};
}

struct FerromagneticReport {
  double beta_estimate = 0.0;
  bool is_ferromagnetic = true;
};

/// Sup of |d^2L/dx dv| over T^d x [-R, R]^d on a lattice, compared to beta_tol.
inline FerromagneticReport check_ferromagnetic(const LagrangianModel& model, double velocity_radius,
                                               double beta_tol, SampleResolution res = {32, 8}) {
  if (!std::isfinite(velocity_radius) || !std::isfinite(beta_tol) || velocity_radius < 0.0)
    throw DomainError("ferromagnetic check needs a bounded velocity box");
  FerromagneticReport report;
  if (model.is_separable()) {
    report.beta_estimate = 0.0;
  } else {
    const int d = model.dimension();
    const auto xs = detail::torus_samples(d, d == 1 ? res.x_per_axis : std::max(1, res.x_per_axis / 2));
    const int half = std::max(1, static_cast<int>(std::ceil(res.v_per_radius * std::max(velocity_radius, 1.0))));
    std::vector<Vec2> vs;
    const double step = velocity_radius / half;
    for (int i = -half; i <= half; ++i) {
      if (d == 1) {
        vs.emplace_back(i * step);
      } else {
        for (int j = -half; j <= half; ++j) vs.emplace_back(i * step, j * step);
      }
    }
    for (const auto& x : xs)
      for (const auto& v : vs) report.beta_estimate = std::max(report.beta_estimate, spectral_norm(eval_mixed_derivative(model, x, v)));
  }
  report.is_ferromagnetic = report.beta_estimate <= beta_tol;
  return report;
}

/// Numeric convexity check: (dL/dv(v1) - dL/dv(v0)) . (v1 - v0) > 0 along
/// lattice segments in the box [-R, R]^d.
inline bool velocity_monotone(const LagrangianModel& model, double radius, int per_axis = 8) {
  const auto xs = detail::torus_samples(model.dimension(), per_axis);
  const auto vs = detail::velocity_samples(model.dimension(), radius, per_axis);
  for (const auto& x : xs) {
    for (std::size_t i = 0; i + 1 < vs.size(); ++i) {
      const Vec2 a = vs[i], b = vs[i + 1];
      const double slope = dot(eval_gradients(model, x, b).dv - eval_gradients(model, x, a).dv, b - a);
      if (!(slope > 0.0)) return false;
    }
  }
  return true;
}

/// Ready-made separable models used throughout the tests and sample configs.
namespace models {

/// L = 1/2 m |v|^2.
inline LagrangianModel free_particle(int dimension = 1, double mass = 1.0) {
  return LagrangianModel::separable(dimension, Mat2::diagonal(mass, dimension == 1 ? 1.0 : mass), {});
}

/// L = 1/2 v^2 - a cos(2 pi (x - shift)); maxima of V at x = shift.
inline LagrangianModel pendulum(double amplitude = 1.0, double shift = 0.0) {
  return LagrangianModel::separable(1, Mat2::diagonal(1.0, 1.0), {{amplitude, {1, 0}, -kTwoPi * shift}});
}

/// L = 1/2 v^2 - cos(4 pi x); V has equal maxima at x = 0 and x = 1/2.
inline LagrangianModel double_well() {
  return LagrangianModel::separable(1, Mat2::diagonal(1.0, 1.0), {{1.0, {2, 0}, 0.0}});
}

}  // namespace models

}  // namespace weakkam
