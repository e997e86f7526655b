#pragma once

#include <functional>
#include <utility>

#include "essrk/linalg.hpp"

namespace essrk {

// Evaluable electromagnetic data for one particle: the vector potential
// A(q,t), its exact spatial Jacobian [A']_ij = dA_i/dq_j, the scalar
// potential phi(q,t) and its gradient (a row vector).
//
// Implementations must be pure and deterministic, and defined for all real
// t: compositions evaluate the field outside [t, t+h] because the middle
// jump of the order-raising recursion runs backward in time.
class field_model {
 public:
  virtual ~field_model() = default;

  virtual vec3 vector_potential(const vec3& q, double t) const = 0;
  virtual mat3 vector_potential_jacobian(const vec3& q, double t) const = 0;
  virtual double scalar_potential(const vec3& q, double t) const = 0;
  virtual vec3 scalar_potential_gradient(const vec3& q, double t) const = 0;
};

class zero_field final : public field_model {
 public:
  vec3 vector_potential(const vec3&, double) const override { return {}; }
  mat3 vector_potential_jacobian(const vec3&, double) const override {
    return {};
  }
  double scalar_potential(const vec3&, double) const override { return 0.0; }
  vec3 scalar_potential_gradient(const vec3&, double) const override {
    return {};
  }
};

// Constant A, zero phi. The kick is exact for this field: a uniform
// position shift at rate -(e/m)A with unchanged momentum.
class uniform_field final : public field_model {
 public:
  explicit uniform_field(const vec3& a) : a_(a) {}

  vec3 vector_potential(const vec3&, double) const override { return a_; }
  mat3 vector_potential_jacobian(const vec3&, double) const override {
    return {};
  }
  double scalar_potential(const vec3&, double) const override { return 0.0; }
  vec3 scalar_potential_gradient(const vec3&, double) const override {
    return {};
  }

 private:
  vec3 a_;
};

// Wraps closed-form A and phi callables and supplies the derivatives by
// central finite differences. Convenience only: the resulting kick map is
// symplectic up to O(fd_step), not exactly, because the shadowed momentum
// update assumes A' is the true Jacobian of A.
class finite_difference_field final : public field_model {
 public:
  using potential_fn = std::function<vec3(const vec3&, double)>;
  using scalar_fn = std::function<double(const vec3&, double)>;

  finite_difference_field(potential_fn a, scalar_fn phi, double fd_step = 1e-6)
      : a_(std::move(a)), phi_(std::move(phi)), step_(fd_step) {}

  vec3 vector_potential(const vec3& q, double t) const override {
    return a_(q, t);
  }

  mat3 vector_potential_jacobian(const vec3& q, double t) const override {
    mat3 jac;
    const double d = scaled_step(q);
    for (std::size_t j = 0; j < 3; ++j) {
      vec3 qp = q, qm = q;
      qp[j] += d;
      qm[j] -= d;
      const vec3 diff = (1.0 / (2.0 * d)) * (a_(qp, t) - a_(qm, t));
      for (std::size_t i = 0; i < 3; ++i) jac(i, j) = diff[i];
    }
    return jac;
  }

  double scalar_potential(const vec3& q, double t) const override {
    return phi_(q, t);
  }

  vec3 scalar_potential_gradient(const vec3& q, double t) const override {
    vec3 g;
    const double d = scaled_step(q);
    for (std::size_t j = 0; j < 3; ++j) {
      vec3 qp = q, qm = q;
      qp[j] += d;
      qm[j] -= d;
      g[j] = (phi_(qp, t) - phi_(qm, t)) / (2.0 * d);
    }
    return g;
  }

  double fd_step() const { return step_; }

 private:
  double scaled_step(const vec3& q) const {
    return step_ * std::max(1.0, norm_inf(q));
  }

  potential_fn a_;
  scalar_fn phi_;
  double step_;
};

}  // namespace essrk
