#pragma once

#include <cmath>

#include "essrk/field.hpp"
#include "essrk/linalg.hpp"

namespace essrk {

// Spatially homogeneous magnetic field along z with a periodically
// perturbed amplitude B(t) = 1 + epsilon sin(omega t), in Coulomb gauge:
//
//   A(q,t) = B(t) [q2, -q1, 0] / 2,    phi = 0.
//
// A' is antisymmetric with entries +-B(t)/2 and independent of q. At
// omega = 1 the modulation drives parametric resonance of the gyration.
class parametric_field final : public field_model {
 public:
  parametric_field(double epsilon, double omega)
      : epsilon_(epsilon), omega_(omega) {}

  double b(double t) const { return 1.0 + epsilon_ * std::sin(omega_ * t); }

  vec3 vector_potential(const vec3& q, double t) const override {
    const double half_b = 0.5 * b(t);
    return {half_b * q[1], -half_b * q[0], 0.0};
  }

  mat3 vector_potential_jacobian(const vec3&, double t) const override {
    const double half_b = 0.5 * b(t);
    mat3 jac;
    jac(0, 1) = half_b;
    jac(1, 0) = -half_b;
    return jac;
  }

  double scalar_potential(const vec3&, double) const override { return 0.0; }
  vec3 scalar_potential_gradient(const vec3&, double) const override {
    return {};
  }

  double epsilon() const { return epsilon_; }
  double omega() const { return omega_; }

 private:
  double epsilon_;
  double omega_;
};

}  // namespace essrk
