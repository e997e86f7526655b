#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <span>
#include <utility>

#include "essrk/field.hpp"
#include "essrk/linalg.hpp"

namespace essrk {

// Central-difference Jacobian of a field's vector potential, step
// fd_step * max(1, |q|_inf) per coordinate.
inline mat3 fd_vector_potential_jacobian(const field_model& field,
                                         const vec3& q, double t,
                                         double fd_step = 1e-5) {
  const double d = fd_step * std::max(1.0, norm_inf(q));
  mat3 jac;
  for (std::size_t j = 0; j < 3; ++j) {
    vec3 qp = q, qm = q;
    qp[j] += d;
    qm[j] -= d;
    const vec3 diff = (1.0 / (2.0 * d)) *
                      (field.vector_potential(qp, t) - field.vector_potential(qm, t));
    for (std::size_t i = 0; i < 3; ++i) jac(i, j) = diff[i];
  }
  return jac;
}

inline vec3 fd_scalar_potential_gradient(const field_model& field,
                                         const vec3& q, double t,
                                         double fd_step = 1e-5) {
  const double d = fd_step * std::max(1.0, norm_inf(q));
  vec3 g;
  for (std::size_t j = 0; j < 3; ++j) {
    vec3 qp = q, qm = q;
    qp[j] += d;
    qm[j] -= d;
    g[j] = (field.scalar_potential(qp, t) - field.scalar_potential(qm, t)) /
           (2.0 * d);
  }
  return g;
}

// curl A from a Jacobian [J]_ij = dA_i/dq_j.
inline vec3 curl_from_jacobian(const mat3& j) {
  return {j(2, 1) - j(1, 2), j(0, 2) - j(2, 0), j(1, 0) - j(0, 1)};
}

struct field_check_report {
  double jacobian_defect = 0.0;            // max |FD J(A) - A'|
  double potential_gradient_defect = 0.0;  // max |FD grad(phi) - grad(phi)|
  double divergence_defect = 0.0;          // max |div A| (Coulomb gauge)
  std::optional<double> curl_defect;       // max |curl A - B_ref|
  double fd_step = 0.0;
  std::size_t sample_count = 0;

  double max_defect() const {
    double m = std::max(jacobian_defect, potential_gradient_defect);
    m = std::max(m, divergence_defect);
    if (curl_defect) m = std::max(m, *curl_defect);
    return m;
  }
};

using magnetic_reference = std::function<vec3(const vec3&, double)>;

// Validates a field's closed forms against finite differences at the given
// sample points: that A' is the Jacobian of A, that grad(phi) matches phi,
// that A is divergence free, and (when a reference B is supplied) that
// curl A reproduces it. Divergence and curl are taken from the FD Jacobian
// so the check is independent of the field's own derivative code. Never
// throws on a defect; the report carries the numbers.
inline field_check_report field_consistency_check(
    const field_model& field,
    std::span<const std::pair<vec3, double>> samples,
    const magnetic_reference& b_reference = {}, double fd_step = 1e-5) {
  field_check_report report;
  report.fd_step = fd_step;
  report.sample_count = samples.size();
  if (b_reference) report.curl_defect = 0.0;
  for (const auto& [q, t] : samples) {
    const mat3 fd_jac = fd_vector_potential_jacobian(field, q, t, fd_step);
    report.jacobian_defect = std::max(
        report.jacobian_defect,
        max_abs(fd_jac - field.vector_potential_jacobian(q, t)));
    report.potential_gradient_defect = std::max(
        report.potential_gradient_defect,
        norm_inf(fd_scalar_potential_gradient(field, q, t, fd_step) -
                 field.scalar_potential_gradient(q, t)));
    report.divergence_defect =
        std::max(report.divergence_defect, std::abs(trace(fd_jac)));
    if (b_reference)
      report.curl_defect =
          std::max(*report.curl_defect,
                   norm_inf(curl_from_jacobian(fd_jac) - b_reference(q, t)));
  }
  return report;
}

}  // namespace essrk
