#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "essrk/baseline.hpp"
#include "essrk/integrate.hpp"
#include "essrk/linalg.hpp"
#include "essrk/splitting.hpp"
#include "essrk/state.hpp"
#include "essrk/system.hpp"

namespace essrk {

// H(q,p,t) = sum_j |p_j - e_j A_j|^2/(2 m_j) + e_j phi_j + V.
inline double energy(const phase_state& s, const particle_system& sys) {
  double e = 0.0;
  for (std::size_t j = 0; j < sys.size(); ++j) {
    const particle_props& pr = sys.props(j);
    const vec3 w =
        s.p[j] - pr.charge * sys.field(j).vector_potential(s.q[j], s.t);
    e += dot(w, w) / (2.0 * pr.mass) +
         pr.charge * sys.field(j).scalar_potential(s.q[j], s.t);
  }
  if (sys.coupling()) e += sys.coupling()->value(s.q, s.t);
  return e;
}

struct diagnostics_report {
  std::vector<std::pair<double, double>> energy_series;
  double symplecticity_defect = std::numeric_limits<double>::quiet_NaN();
  double convergence_slope = std::numeric_limits<double>::quiet_NaN();
  std::vector<std::pair<double, double>> amplitude_error_series;
  std::vector<std::pair<double, double>> phase_error_series;
};

using phase_map = std::function<phase_state(const phase_state&)>;

// |M^T J M - J|_max for the map's central-difference Jacobian M in the
// flattened (q, p) coordinates; zero (up to FD noise) iff the map is
// symplectic at this state. Default FD step: 1e-5 * max(1, |state|_inf).
inline double symplecticity_defect(const phase_map& map, const phase_state& at,
                                   double fd_step = 0.0) {
  const std::size_t n = at.size();
  const std::size_t dim = 6 * n;
  const std::size_t half = 3 * n;
  const double delta =
      fd_step > 0.0 ? fd_step : 1e-5 * std::max(1.0, state_norm_inf(at));

  const std::vector<double> z0 = flatten(at);
  std::vector<double> m(dim * dim);  // m[r * dim + c] = dPhi_r / dz_c
  for (std::size_t c = 0; c < dim; ++c) {
    std::vector<double> zp = z0, zm = z0;
    zp[c] += delta;
    zm[c] -= delta;
    const std::vector<double> fp = flatten(map(unflatten(zp, at.t)));
    const std::vector<double> fm = flatten(map(unflatten(zm, at.t)));
    for (std::size_t r = 0; r < dim; ++r)
      m[r * dim + c] = (fp[r] - fm[r]) / (2.0 * delta);
  }

  // (J M)_{r c} = M_{r+half, c} for r < half, -M_{r-half, c} otherwise.
  double defect = 0.0;
  for (std::size_t a = 0; a < dim; ++a)
    for (std::size_t b = 0; b < dim; ++b) {
      double sum = 0.0;
      for (std::size_t r = 0; r < half; ++r)
        sum += m[r * dim + a] * m[(r + half) * dim + b] -
               m[(r + half) * dim + a] * m[r * dim + b];
      const double j_ab = (b == a + half) ? 1.0 : (a == b + half) ? -1.0 : 0.0;
      defect = std::max(defect, std::abs(sum - j_ab));
    }
  return defect;
}

struct convergence_result {
  double slope = 0.0;
  std::vector<double> step_sizes;
  std::vector<double> errors;
  // False when the errors do not shrink monotonically with h, which
  // indicates step sizes outside the asymptotic regime (or an error floor).
  bool monotone = true;
};

// Global error at the fixed final time against an independent reference
// (classical RK4 at min(h)/reference_divisor), fitted as a log-log slope.
inline convergence_result convergence_order(const step_fn& stepper,
                                            const particle_system& sys,
                                            const phase_state& initial,
                                            std::span<const double> h_list,
                                            double final_time,
                                            double reference_divisor = 50.0) {
  if (h_list.size() < 3)
    throw std::invalid_argument("convergence_order: need at least 3 step sizes");
  double h_min = h_list[0];
  for (double h : h_list) h_min = std::min(h_min, h);
  const auto ref_steps =
      static_cast<std::size_t>(std::llround(final_time / (h_min / reference_divisor)));
  const trajectory ref = integrate(initial, make_rk4_stepper(),
                                   final_time / static_cast<double>(ref_steps),
                                   ref_steps, sys, ref_steps);
  const std::vector<double> ref_z = flatten(ref.final_state());

  convergence_result result;
  for (double h : h_list) {
    const auto n = static_cast<std::size_t>(std::llround(final_time / h));
    const double h_eff = final_time / static_cast<double>(n);
    const trajectory traj = integrate(initial, stepper, h_eff, n, sys, n);
    const std::vector<double> z = flatten(traj.final_state());
    double err = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i)
      err = std::max(err, std::abs(z[i] - ref_z[i]));
    result.step_sizes.push_back(h_eff);
    result.errors.push_back(err);
  }

  for (std::size_t i = 0; i + 1 < result.errors.size(); ++i) {
    const bool h_decreasing = result.step_sizes[i] > result.step_sizes[i + 1];
    const bool e_decreasing = result.errors[i] > result.errors[i + 1];
    if (h_decreasing != e_decreasing || result.errors[i + 1] <= 0.0)
      result.monotone = false;
  }

  // least-squares slope of log(error) vs log(h)
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const auto count = static_cast<double>(result.errors.size());
  for (std::size_t i = 0; i < result.errors.size(); ++i) {
    const double x = std::log(result.step_sizes[i]);
    const double y = std::log(std::max(result.errors[i], 1e-300));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  result.slope = (count * sxy - sx * sy) / (count * sxx - sx * sx);
  return result;
}

struct velocity_polar {
  double amplitude;  // v = sqrt(v1^2 + v2^2)
  double phase;      // theta with v1 = v sin(theta), v2 = v cos(theta)
};

// Polar decomposition of the in-plane gyration velocity v = (p - eA)/m,
// separating the slowly varying amplitude from the fast phase.
inline velocity_polar guiding_center_decompose(const phase_state& s,
                                               const particle_system& sys,
                                               std::size_t particle = 0) {
  const particle_props& pr = sys.props(particle);
  const vec3 a = sys.field(particle).vector_potential(s.q[particle], s.t);
  const vec3 v = (1.0 / pr.mass) * (s.p[particle] - pr.charge * a);
  const double amplitude = std::hypot(v[0], v[1]);
  const double phase = amplitude == 0.0 ? 0.0 : std::atan2(v[0], v[1]);
  return {amplitude, phase};
}

struct h2_flow_result {
  phase_state state;
  double action = 0.0;  // integral of the total effective potential f
};

// High-accuracy reference for the H2 dynamics
//   qdot_j = -(e_j/m_j) A_j,  pdot_j = (e_j/m_j) p_j A'_j - grad_{q_j} f,
// augmented with zdot = f so the action integral comes out of the same run.
// Plain RK4 on the ODE, deliberately independent of the kick's stage
// recursion; this is the oracle the shadowed update is checked against.
inline h2_flow_result h2_reference_flow(const phase_state& initial,
                                        double duration, std::size_t n_steps,
                                        const particle_system& sys) {
  const std::size_t n = sys.size();
  struct deriv {
    std::vector<vec3> qdot, pdot;
    double zdot;
  };
  const auto rhs = [&](const phase_state& s) {
    deriv d;
    d.qdot.resize(n);
    d.pdot.resize(n);
    std::vector<vec3> grad_v(n);
    if (sys.coupling()) sys.coupling()->gradient(s.q, s.t, grad_v);
    for (std::size_t j = 0; j < n; ++j) {
      const particle_props& pr = sys.props(j);
      const field_model& fld = sys.field(j);
      const double em = pr.charge / pr.mass;
      const vec3 a = fld.vector_potential(s.q[j], s.t);
      const mat3 ajac = fld.vector_potential_jacobian(s.q[j], s.t);
      d.qdot[j] = -em * a;
      d.pdot[j] = em * (s.p[j] * ajac) -
                  (pr.charge * em) * (a * ajac) -
                  pr.charge * fld.scalar_potential_gradient(s.q[j], s.t) -
                  grad_v[j];
    }
    d.zdot = total_effective_potential(sys, s.q, s.t);
    return d;
  };

  phase_state s = initial;
  double z = 0.0;
  const double h = duration / static_cast<double>(n_steps);
  for (std::size_t step = 0; step < n_steps; ++step) {
    const phase_state s0 = s;
    const double z0 = z;
    const auto advance = [&](const deriv& d, double w) {
      phase_state out = s0;
      for (std::size_t j = 0; j < n; ++j) {
        out.q[j] += w * d.qdot[j];
        out.p[j] += w * d.pdot[j];
      }
      out.t = s0.t + w;
      return out;
    };
    const deriv k1 = rhs(s0);
    const deriv k2 = rhs(advance(k1, 0.5 * h));
    const deriv k3 = rhs(advance(k2, 0.5 * h));
    const deriv k4 = rhs(advance(k3, h));
    for (std::size_t j = 0; j < n; ++j) {
      s.q[j] += (h / 6.0) *
                (k1.qdot[j] + 2.0 * k2.qdot[j] + 2.0 * k3.qdot[j] + k4.qdot[j]);
      s.p[j] += (h / 6.0) *
                (k1.pdot[j] + 2.0 * k2.pdot[j] + 2.0 * k3.pdot[j] + k4.pdot[j]);
    }
    z = z0 + (h / 6.0) * (k1.zdot + 2.0 * k2.zdot + 2.0 * k3.zdot + k4.zdot);
    s.t = s0.t + h;
  }
  return {std::move(s), z};
}

// Residual of the closed-form momentum recovery along the H2 flow:
//
//   p(t1) = (p(t0) - dc/dx) [dg/dx]^{-1},
//
// with the position flow map g and action integral c obtained by fine
// reference integration and differentiated w.r.t. the initial position x
// by central differences. The position flow is block-diagonal over
// particles, so dg/dx is inverted block by block.
inline double shadowing_residual(const particle_system& sys,
                                 const phase_state& state, double t0,
                                 double t1, std::size_t reference_steps = 1000,
                                 double fd_step = 0.0) {
  const std::size_t n = sys.size();
  phase_state base = state;
  base.t = t0;
  const double duration = t1 - t0;
  const double delta =
      fd_step > 0.0 ? fd_step : 1e-5 * std::max(1.0, state_norm_inf(base));

  const h2_flow_result center = h2_reference_flow(base, duration, reference_steps, sys);

  double residual = 0.0;
  std::vector<mat3> dg(n);
  std::vector<vec3> dc(n);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t d = 0; d < 3; ++d) {
      phase_state plus = base, minus = base;
      plus.q[j][d] += delta;
      minus.q[j][d] -= delta;
      const h2_flow_result fp = h2_reference_flow(plus, duration, reference_steps, sys);
      const h2_flow_result fm = h2_reference_flow(minus, duration, reference_steps, sys);
      for (std::size_t i = 0; i < 3; ++i)
        dg[j](i, d) = (fp.state.q[j][i] - fm.state.q[j][i]) / (2.0 * delta);
      dc[j][d] = (fp.action - fm.action) / (2.0 * delta);
    }
  }
  for (std::size_t j = 0; j < n; ++j) {
    const auto inv = try_inverse(dg[j], kick_det_floor);
    if (!inv)
      throw std::runtime_error("shadowing_residual: singular position flow Jacobian");
    const vec3 recovered = (base.p[j] - dc[j]) * (*inv);
    residual = std::max(residual, norm_inf(recovered - center.state.p[j]));
  }
  return residual;
}

// |c(q) - integral of f| with the integral taken along the fine reference
// H2 trajectory; O(h^{p+1}) for a tableau of order p.
inline double action_quadrature_residual(const particle_system& sys,
                                         const phase_state& state,
                                         const butcher_tableau& tab, double h,
                                         std::size_t reference_steps = 1000) {
  const auto gen = kick_generating(state, tab, h, sys);
  const h2_flow_result ref = h2_reference_flow(state, h, reference_steps, sys);
  return std::abs(gen.action - ref.action);
}

}  // namespace essrk
