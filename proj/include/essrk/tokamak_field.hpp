#pragma once

#include <cmath>

#include "essrk/errors.hpp"
#include "essrk/field.hpp"
#include "essrk/linalg.hpp"

namespace essrk {

// Static toroidal magnetic field of tokamak type,
//
//   B(r,theta,phi) = B0 R / (R + r cos theta) (e_phi + r/(Q R) e_theta),
//
// written as a Cartesian vector potential in Coulomb gauge,
//
//   A(x,y,z) = B0 [ -u y,  u x,  -R log(rho/R) ],
//   u = ((rho - R)^2 + z^2) / (2 Q rho^2),   rho = sqrt(x^2 + y^2),
//
// plus an electric potential phi(x,y,z) = -E0 cos z. R is the major radius
// and Q the safety factor. The formulas divide by rho^2, so the torus axis
// rho = 0 is outside the domain; evaluations there raise
// field_domain_error instead of returning NaN.
class tokamak_field final : public field_model {
 public:
  tokamak_field(double b0, double e0, double major_radius,
                double safety_factor)
      : b0_(b0), e0_(e0), r_(major_radius), q_(safety_factor) {}

  vec3 vector_potential(const vec3& q, double t) const override {
    return eval(q, t).a;
  }

  mat3 vector_potential_jacobian(const vec3& q, double t) const override {
    const auto g = eval(q, t);
    const double rho = g.rho;
    const double rho2 = rho * rho;
    // du/dx = (x / (Q rho^3)) ((rho - R) - w/rho), du/dz = z / (Q rho^2)
    const double radial = ((rho - r_) - g.w / rho) / (q_ * rho2 * rho);
    const double ux = q[0] * radial;
    const double uy = q[1] * radial;
    const double uz = g.z / (q_ * rho2);
    mat3 jac;
    jac(0, 0) = -b0_ * q[1] * ux;
    jac(0, 1) = -b0_ * (g.u + q[1] * uy);
    jac(0, 2) = -b0_ * q[1] * uz;
    jac(1, 0) = b0_ * (g.u + q[0] * ux);
    jac(1, 1) = b0_ * q[0] * uy;
    jac(1, 2) = b0_ * q[0] * uz;
    jac(2, 0) = -b0_ * r_ * q[0] / rho2;
    jac(2, 1) = -b0_ * r_ * q[1] / rho2;
    jac(2, 2) = 0.0;
    return jac;
  }

  double scalar_potential(const vec3& q, double) const override {
    return -e0_ * std::cos(q[2]);
  }

  vec3 scalar_potential_gradient(const vec3& q, double) const override {
    return {0.0, 0.0, e0_ * std::sin(q[2])};
  }

  // Closed-form toroidal B at a Cartesian point, used to cross-check that
  // the curl of A reproduces the field this potential was derived from.
  vec3 magnetic_field(const vec3& q) const {
    const double rho2 = check_domain(q);
    const double rho = std::sqrt(rho2);
    const double minor_r = std::hypot(rho - r_, q[2]);
    const vec3 e_phi{-q[1] / rho, q[0] / rho, 0.0};
    const double scale = b0_ * r_ / rho;
    if (minor_r == 0.0) return scale * e_phi;
    const double cos_theta = (rho - r_) / minor_r;
    const double sin_theta = q[2] / minor_r;
    const vec3 e_theta{-sin_theta * q[0] / rho, -sin_theta * q[1] / rho,
                       cos_theta};
    return scale * (e_phi + (minor_r / (q_ * r_)) * e_theta);
  }

  double b0() const { return b0_; }
  double e0() const { return e0_; }
  double major_radius() const { return r_; }
  double safety_factor() const { return q_; }

 private:
  struct geometry {
    vec3 a;
    double rho, w, u, z;
  };

  double check_domain(const vec3& q) const {
    const double rho2 = q[0] * q[0] + q[1] * q[1];
    if (rho2 < 1e-12)
      throw field_domain_error("tokamak field evaluated on the torus axis");
    return rho2;
  }

  geometry eval(const vec3& q, double) const {
    const double rho2 = check_domain(q);
    const double rho = std::sqrt(rho2);
    const double w = (rho - r_) * (rho - r_) + q[2] * q[2];
    const double u = w / (2.0 * q_ * rho2);
    return {{-b0_ * u * q[1], b0_ * u * q[0], -b0_ * r_ * std::log(rho / r_)},
            rho,
            w,
            u,
            q[2]};
  }

  double b0_, e0_, r_, q_;
};

}  // namespace essrk
