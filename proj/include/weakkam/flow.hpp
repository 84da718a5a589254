#pragma once

// Discrete Euler-Lagrange map Phi_tau(x, v) = (y, w), y = x + tau v, with w
// solving  dL/dv(x, v) + tau dL/dx(y, w) - dL/dv(y, w) = 0,
// an RK4 reference for the continuous flow, and orbit diagnostics.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "weakkam/error.hpp"
#include "weakkam/geometry.hpp"
#include "weakkam/graph.hpp"
#include "weakkam/model.hpp"
#include "weakkam/weakkam.hpp"

namespace weakkam {

using PhaseState = PhasePoint;

namespace detail {

inline void check_state(const LagrangianModel& model, const PhaseState& s) {
  if (!is_finite(s.x) || !is_finite(s.v)) throw DomainError("non-finite phase state");
  if (model.dimension() == 1 && (s.x[1] != 0.0 || s.v[1] != 0.0))
    throw DomainError("one-dimensional state has a nonzero second component");
}

inline Vec2 el_residual(const LagrangianModel& model, double tau, const Vec2& p, const Vec2& y, const Vec2& w) {
  const Gradients gy = eval_gradients(model, y, w);
  return model.project(p + tau * gy.dx - gy.dv);
}

}  // namespace detail

struct NewtonOptions {
  double tolerance = 1e-12;
  int max_iterations = 50;
};

/// Damped Newton solve of the implicit step from w0 = v; the step is halved
/// while the residual norm fails to decrease.
inline PhaseState discrete_el_step_newton(const LagrangianModel& model, double tau, const PhaseState& s,
                                          const NewtonOptions& options = {}) {
  if (!(tau > 0.0)) throw DomainError("time step must be positive");
  detail::check_state(model, s);
  const Vec2 y = model.project(wrap_unit(s.x + tau * s.v));
  const Vec2 p = eval_gradients(model, s.x, s.v).dv;
  const double scale = 1.0 + norm(p);
  Vec2 w = s.v;
  Vec2 r = detail::el_residual(model, tau, p, y, w);
  for (int it = 0; it < options.max_iterations; ++it) {
    if (norm(r) <= options.tolerance * scale) return {y, w};
    Mat2 jac = tau * eval_mixed_derivative(model, y, w) - eval_velocity_hessian(model, y, w);
    if (model.dimension() == 1) jac(1, 1) = -1.0;
    const Vec2 step = jac.inverse() * r;
    double damping = 1.0;
    Vec2 trial = model.project(w - step);
    Vec2 rt = detail::el_residual(model, tau, p, y, trial);
    for (int halvings = 0; norm(rt) >= norm(r) && halvings < 30; ++halvings) {
      damping *= 0.5;
      trial = model.project(w - damping * step);
      rt = detail::el_residual(model, tau, p, y, trial);
    }
    w = trial;
    r = rt;
  }
  if (norm(r) <= options.tolerance * scale) return {y, w};
  throw FlowError("discrete Euler-Lagrange Newton solve did not converge; residual " + std::to_string(norm(r)));
}

/// Closed form w = v - tau M^-1 grad V(y) for separable models, Newton otherwise.
inline PhaseState discrete_el_step(const LagrangianModel& model, double tau, const PhaseState& s) {
  if (!model.is_separable()) return discrete_el_step_newton(model, tau, s);
  if (!(tau > 0.0)) throw DomainError("time step must be positive");
  detail::check_state(model, s);
  const Vec2 y = model.project(wrap_unit(s.x + tau * s.v));
  const Vec2 w = model.project(s.v - tau * (model.inverse_mass() * model.potential_gradient(y)));
  return {y, w};
}

inline std::vector<PhaseState> discrete_orbit(const LagrangianModel& model, double tau, const PhaseState& start,
                                              int steps) {
  std::vector<PhaseState> orbit{start};
  for (int k = 0; k < steps; ++k) orbit.push_back(discrete_el_step(model, tau, orbit.back()));
  return orbit;
}

/// 1/2 v.Mv + V(x) for separable models.
inline double mechanical_energy(const LagrangianModel& model, const PhaseState& s) {
  if (!model.is_separable()) throw ConfigError("energy is only defined here for separable models");
  return 0.5 * dot(s.v, model.mass() * s.v) + model.potential(s.x);
}

namespace detail {

inline Vec2 acceleration(const LagrangianModel& model, const Vec2& x, const Vec2& v) {
  if (model.is_separable()) return model.project(-(model.inverse_mass() * model.potential_gradient(x)));
  // d/dt dL/dv = dL/dx  =>  Hvv vdot = dL/dx - (d^2L/dx dv)^T v
  const Gradients g = eval_gradients(model, x, v);
  const Mat2 hvv = eval_velocity_hessian(model, x, v);
  const Vec2 rhs = g.dx - eval_mixed_derivative(model, x, v).transposed() * v;
  return model.project(hvv.inverse() * rhs);
}

inline PhaseState rk4(const LagrangianModel& model, PhaseState s, double t, long steps) {
  const double dt = t / static_cast<double>(steps);
  for (long i = 0; i < steps; ++i) {
    const Vec2 k1x = s.v, k1v = acceleration(model, s.x, s.v);
    const Vec2 x2 = s.x + 0.5 * dt * k1x, v2 = s.v + 0.5 * dt * k1v;
    const Vec2 k2x = v2, k2v = acceleration(model, x2, v2);
    const Vec2 x3 = s.x + 0.5 * dt * k2x, v3 = s.v + 0.5 * dt * k2v;
    const Vec2 k3x = v3, k3v = acceleration(model, x3, v3);
    const Vec2 x4 = s.x + dt * k3x, v4 = s.v + dt * k3v;
    const Vec2 k4x = v4, k4v = acceleration(model, x4, v4);
    s.x += dt / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
    s.v += dt / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
  }
  return s;
}

}  // namespace detail

struct FlowOptions {
  double tolerance = 1e-10;
  int max_halvings = 24;
};

/// Time-t map of the Euler-Lagrange flow by RK4, halving the substep until
/// two successive refinements agree to `tolerance` in phase distance.
inline PhaseState continuous_flow_reference(const LagrangianModel& model, const PhaseState& s, double t, double dt,
                                            const FlowOptions& options = {}) {
  detail::check_state(model, s);
  if (!(dt > 0.0) || !(t >= 0.0) || dt > t * (1.0 + 1e-12)) {
    if (t == 0.0) return {wrap_unit(s.x), s.v};
    throw DomainError("flow substep must satisfy 0 < dt <= t");
  }
  long steps = std::max(1L, std::lround(std::ceil(t / dt - 1e-9)));
  PhaseState prev = detail::rk4(model, s, t, steps);
  for (int h = 0; h < options.max_halvings; ++h) {
    steps *= 2;
    const PhaseState next = detail::rk4(model, s, t, steps);
    const double diff = norm(next.x - prev.x) + norm(next.v - prev.v);
    if (diff <= options.tolerance) return {model.project(wrap_unit(next.x)), next.v};
    prev = next;
  }
  throw FlowError("RK4 refinement did not reach tolerance");
}

/// Samples phi^{k dt}(start), k = 0 .. count - 1.
inline std::vector<PhaseState> sample_orbit(const LagrangianModel& model, const PhaseState& start, double dt,
                                            int count) {
  if (count < 1) throw DomainError("orbit needs at least one sample");
  std::vector<PhaseState> out{{wrap_unit(start.x), start.v}};
  for (int k = 1; k < count; ++k) out.push_back(continuous_flow_reference(model, out.back(), dt, dt / 4.0));
  return out;
}

struct PseudoOrbitReport {
  double max_defect = 0.0;
  std::vector<double> defects;  // d(Phi_tau(zeta_k), zeta_{k+1})
  std::vector<PhaseState> samples;
};

/// zeta_k = phi^{k tau}(start); defect_k = d(Phi_tau(zeta_k), zeta_{k+1}).
inline PseudoOrbitReport pseudo_orbit_defect(const LagrangianModel& model, double tau, const PhaseState& start,
                                             int n) {
  if (n < 1) throw DomainError("pseudo-orbit needs at least one step");
  PseudoOrbitReport r;
  r.samples = sample_orbit(model, start, tau, n + 1);
  for (int k = 0; k < n; ++k) {
    const PhaseState stepped = discrete_el_step(model, tau, r.samples[static_cast<std::size_t>(k)]);
    const double d = phase_distance(stepped, r.samples[static_cast<std::size_t>(k) + 1]);
    r.defects.push_back(d);
    r.max_defect = std::max(r.max_defect, d);
  }
  return r;
}

/// |[u(x_0) - u(x_-n)] - [sum of step costs + n tau alpha]|: the discrete
/// calibration identity with bar L(tau) replaced by -alpha.
inline double calibrated_curve_residual(const CalibratedConfiguration& cfg, const EdgeGraph& g,
                                        const std::vector<double>& u, double alpha) {
  if (cfg.steps() < 1) throw ConfigError("configuration needs at least one step");
  double action = 0.0;
  for (int k = 0; k < cfg.steps(); ++k) {
    const EdgeRef e = cfg.edge(k);
    action += g.cost(e.node, e.offset);
  }
  const double du = u[static_cast<std::size_t>(cfg.nodes.front())] - u[static_cast<std::size_t>(cfg.nodes.back())];
  return std::abs(du - (action + cfg.steps() * cfg.tau * alpha));
}

}  // namespace weakkam
