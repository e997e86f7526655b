#pragma once

#include <cstddef>
#include <vector>

#include "essrk/butcher.hpp"
#include "essrk/errors.hpp"
#include "essrk/linalg.hpp"
#include "essrk/state.hpp"
#include "essrk/system.hpp"

namespace essrk {

// Determinant guard for the 3x3 momentum-update inverse.
inline constexpr double kick_det_floor = 1e-12;

// psi_1: exact flow of H1 = |p|^2/(2m), a linear position shift
//   q_j += (h/m_j) p_j.
// h may be negative; the compositions take backward drifts.
inline void drift(phase_state& s, double h, const particle_system& sys) {
  for (std::size_t j = 0; j < s.size(); ++j)
    s.q[j] += (h / sys.props(j).mass) * s.p[j];
  s.t += h;
}

// Stage data of the shadowed Runge-Kutta kick, per stage i and particle j:
//
//   k_i  = -(e/m) A(Y_i, t_i)
//   k'_i = -(e/m) A'(Y_i, t_i) (I + h sum_{l<i} a_il k'_l)
//   gl_i = grad f(Y_i, t_i)    (I + h sum_{l<i} a_il k'_l)
//
// with stage positions Y_i = q + h sum_{l<i} a_il k_l and stage times
// t_i = t + h c_i. k'_i is, by the chain rule, the exact q-Jacobian of k_i;
// that is what makes the momentum update below exactly symplectic. l_i is
// the total effective potential f at the stage configuration, which for an
// ensemble includes the interaction, so gl_i couples the particles while
// the k recursion stays block-diagonal.
struct kick_stages_result {
  std::size_t stages = 0;
  std::size_t particles = 0;
  std::vector<vec3> k;        // [i * particles + j]
  std::vector<mat3> kprime;   // [i * particles + j]
  std::vector<vec3> grad_l;   // [i * particles + j]
  std::vector<double> l;      // per stage

  const vec3& k_at(std::size_t i, std::size_t j) const {
    return k[i * particles + j];
  }
  const mat3& kprime_at(std::size_t i, std::size_t j) const {
    return kprime[i * particles + j];
  }
  const vec3& grad_l_at(std::size_t i, std::size_t j) const {
    return grad_l[i * particles + j];
  }
};

inline kick_stages_result kick_stages_over(const phase_state& s,
                                           double t_start,
                                           const butcher_tableau& tab,
                                           double h,
                                           const particle_system& sys) {
  const std::size_t n = sys.size();
  const std::size_t ns = tab.stages();
  kick_stages_result r;
  r.stages = ns;
  r.particles = n;
  r.k.resize(ns * n);
  r.kprime.resize(ns * n);
  r.grad_l.resize(ns * n);
  r.l.assign(ns, 0.0);

  std::vector<vec3> y(n);      // stage configuration
  std::vector<mat3> chain(n);  // I + h sum_{l<i} a_il k'_l
  std::vector<vec3> grad_v(n);

  for (std::size_t i = 0; i < ns; ++i) {
    const double ti = t_start + h * tab.c(i);
    for (std::size_t j = 0; j < n; ++j) {
      vec3 yj = s.q[j];
      mat3 gj = mat3::identity();
      for (std::size_t l = 0; l < i; ++l) {
        const double w = h * tab.a(i, l);
        if (w != 0.0) {
          yj += w * r.k_at(l, j);
          gj += w * r.kprime_at(l, j);
        }
      }
      y[j] = yj;
      chain[j] = gj;
    }
    double l_total = 0.0;
    if (sys.coupling()) {
      sys.coupling()->gradient(y, ti, grad_v);
      l_total = sys.coupling()->value(y, ti);
    } else {
      for (auto& g : grad_v) g = vec3{};
    }
    for (std::size_t j = 0; j < n; ++j) {
      const particle_props& pr = sys.props(j);
      const field_model& fld = sys.field(j);
      const double em = pr.charge / pr.mass;
      const vec3 a = fld.vector_potential(y[j], ti);
      const mat3 ajac = fld.vector_potential_jacobian(y[j], ti);
      r.k[i * n + j] = -em * a;
      r.kprime[i * n + j] = -em * (ajac * chain[j]);
      const vec3 grad_f = (pr.charge * em) * (a * ajac) +
                          pr.charge * fld.scalar_potential_gradient(y[j], ti) +
                          grad_v[j];
      r.grad_l[i * n + j] = grad_f * chain[j];
      l_total += 0.5 * pr.charge * em * dot(a, a) +
                 pr.charge * fld.scalar_potential(y[j], ti);
    }
    r.l[i] = l_total;
  }
  return r;
}

inline kick_stages_result kick_stages(const phase_state& s,
                                      const butcher_tableau& tab, double h,
                                      const particle_system& sys) {
  return kick_stages_over(s, s.t, tab, h, sys);
}

// The generating-function decomposition of the kick:
//
//   g(q)  = q + h sum_i b_i k_i(q)            (position map)
//   c(q)  = h sum_i b_i l_i(q)                (action increment)
//   g'(q) = I + h sum_i b_i k'_i(q)
//
// The kick is Q = g(q), P = (p - grad c)(g')^{-1}, the canonical
// transformation generated by S(P,q) = <P, g(q)> + c(q).
struct kick_generating_result {
  std::vector<vec3> g;
  std::vector<mat3> g_jacobian;
  std::vector<vec3> action_gradient;  // grad c, one row vector per particle
  double action = 0.0;                // c(q)
};

inline kick_generating_result kick_generating_over(const phase_state& s,
                                                   double t_start,
                                                   const butcher_tableau& tab,
                                                   double h,
                                                   const particle_system& sys) {
  const auto st = kick_stages_over(s, t_start, tab, h, sys);
  const std::size_t n = st.particles;
  kick_generating_result r;
  r.g = s.q;
  r.g_jacobian.assign(n, mat3::identity());
  r.action_gradient.assign(n, vec3{});
  double weighted_l = 0.0;
  for (std::size_t i = 0; i < st.stages; ++i) {
    const double w = h * tab.b(i);
    weighted_l += tab.b(i) * st.l[i];
    if (w == 0.0) continue;
    for (std::size_t j = 0; j < n; ++j) {
      r.g[j] += w * st.k_at(i, j);
      r.g_jacobian[j] += w * st.kprime_at(i, j);
      r.action_gradient[j] += w * st.grad_l_at(i, j);
    }
  }
  r.action = h * weighted_l;
  return r;
}

inline kick_generating_result kick_generating(const phase_state& s,
                                              const butcher_tableau& tab,
                                              double h,
                                              const particle_system& sys) {
  return kick_generating_over(s, s.t, tab, h, sys);
}

// psi_2(t_start + h, t_start): position by explicit Runge-Kutta, momentum
// by shadowing,
//
//   Q_j = q_j + h sum_i b_i k_i
//   P_j = (p_j - h sum_i b_i gl_i)(I + h sum_i b_i k'_i)^{-1}.
//
// The matrix is block-diagonal over particles, so the inverse is applied
// block by block. Symplectic for every t and h; an O(h^{p+1}) approximation
// of the H2 flow when the tableau has order p.
inline void kick_over(phase_state& s, double t_start, double h,
                      const butcher_tableau& tab, const particle_system& sys) {
  const auto gen = kick_generating_over(s, t_start, tab, h, sys);
  for (std::size_t j = 0; j < s.size(); ++j) {
    const auto inv = try_inverse(gen.g_jacobian[j], kick_det_floor);
    if (!inv) throw singular_update_error(j, det(gen.g_jacobian[j]));
    s.p[j] = (s.p[j] - gen.action_gradient[j]) * (*inv);
    s.q[j] = gen.g[j];
  }
  s.t = t_start + h;
}

inline void kick(phase_state& s, const butcher_tableau& tab, double h,
                 const particle_system& sys) {
  kick_over(s, s.t, h, tab, sys);
}

}  // namespace essrk
