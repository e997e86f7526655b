#pragma once

#include <cstddef>
#include <vector>

#include "essrk/linalg.hpp"
#include "essrk/state.hpp"
#include "essrk/system.hpp"

namespace essrk {

struct phase_rhs {
  std::vector<vec3> qdot;
  std::vector<vec3> pdot;
};

// Hamilton's equations for the full Hamiltonian
//   H = sum_j |p_j - e_j A_j|^2/(2 m_j) + e_j phi_j + V(q,t):
//   qdot_j = (p_j - e_j A_j)/m_j
//   pdot_j = e_j (qdot_j A'_j) - e_j grad phi_j - grad_{q_j} V.
inline phase_rhs hamiltonian_rhs(const phase_state& s,
                                 const particle_system& sys) {
  const std::size_t n = sys.size();
  phase_rhs r;
  r.qdot.resize(n);
  r.pdot.resize(n);
  std::vector<vec3> grad_v(n);
  if (sys.coupling()) sys.coupling()->gradient(s.q, s.t, grad_v);
  for (std::size_t j = 0; j < n; ++j) {
    const particle_props& pr = sys.props(j);
    const field_model& fld = sys.field(j);
    const vec3 a = fld.vector_potential(s.q[j], s.t);
    const mat3 ajac = fld.vector_potential_jacobian(s.q[j], s.t);
    const vec3 v = (1.0 / pr.mass) * (s.p[j] - pr.charge * a);
    r.qdot[j] = v;
    r.pdot[j] = pr.charge * (v * ajac) -
                pr.charge * fld.scalar_potential_gradient(s.q[j], s.t) -
                grad_v[j];
  }
  return r;
}

// One classical RK4 step on the full Hamiltonian. Not symplectic; this is
// the comparison baseline, and the contrast is the point.
inline void rk4_baseline_step(phase_state& s, double h,
                              const particle_system& sys) {
  const std::size_t n = s.size();
  const phase_state s0 = s;

  const auto advance = [&](const phase_rhs& d, double w) {
    phase_state out = s0;
    for (std::size_t j = 0; j < n; ++j) {
      out.q[j] += w * d.qdot[j];
      out.p[j] += w * d.pdot[j];
    }
    return out;
  };

  const phase_rhs k1 = hamiltonian_rhs(s0, sys);
  phase_state mid = advance(k1, 0.5 * h);
  mid.t = s0.t + 0.5 * h;
  const phase_rhs k2 = hamiltonian_rhs(mid, sys);
  mid = advance(k2, 0.5 * h);
  mid.t = s0.t + 0.5 * h;
  const phase_rhs k3 = hamiltonian_rhs(mid, sys);
  phase_state end = advance(k3, h);
  end.t = s0.t + h;
  const phase_rhs k4 = hamiltonian_rhs(end, sys);

  const double w = h / 6.0;
  for (std::size_t j = 0; j < n; ++j) {
    s.q[j] += w * (k1.qdot[j] + 2.0 * k2.qdot[j] + 2.0 * k3.qdot[j] + k4.qdot[j]);
    s.p[j] += w * (k1.pdot[j] + 2.0 * k2.pdot[j] + 2.0 * k3.pdot[j] + k4.pdot[j]);
  }
  s.t = s0.t + h;
}

}  // namespace essrk
