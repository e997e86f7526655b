#pragma once

#include <memory>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "essrk/field.hpp"
#include "essrk/linalg.hpp"

namespace essrk {

struct particle_props {
  double charge = 1.0;
  double mass = 1.0;
};

// Interaction potential V(q_1,...,q_N,t). It may depend on positions and
// time only, never on momenta; that restriction is what keeps the kick's
// position recursion block-diagonal.
class interaction {
 public:
  virtual ~interaction() = default;

  virtual double value(std::span<const vec3> q, double t) const = 0;
  virtual void gradient(std::span<const vec3> q, double t,
                        std::span<vec3> out) const = 0;
};

// All-pairs harmonic coupling, V = (k/2) sum_{i<j} |q_i - q_j|^2.
class harmonic_interaction final : public interaction {
 public:
  explicit harmonic_interaction(double stiffness) : k_(stiffness) {}

  double value(std::span<const vec3> q, double) const override {
    double v = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i)
      for (std::size_t j = i + 1; j < q.size(); ++j) {
        const vec3 d = q[i] - q[j];
        v += 0.5 * k_ * dot(d, d);
      }
    return v;
  }

  void gradient(std::span<const vec3> q, double,
                std::span<vec3> out) const override {
    for (auto& g : out) g = vec3{};
    for (std::size_t i = 0; i < q.size(); ++i)
      for (std::size_t j = i + 1; j < q.size(); ++j) {
        const vec3 d = k_ * (q[i] - q[j]);
        out[i] += d;
        out[j] -= d;
      }
  }

  double stiffness() const { return k_; }

 private:
  double k_;
};

// N particles, one field model per particle, and an optional position-only
// interaction. Immutable after construction; all evaluations are pure, so
// a system may be shared freely across threads.
class particle_system {
 public:
  particle_system(std::vector<particle_props> particles,
                  std::vector<std::shared_ptr<const field_model>> fields,
                  std::shared_ptr<const interaction> coupling = nullptr)
      : particles_(std::move(particles)),
        fields_(std::move(fields)),
        coupling_(std::move(coupling)) {
    if (particles_.empty() || particles_.size() != fields_.size())
      throw std::invalid_argument(
          "particle_system: need one field model per particle");
    for (const auto& pr : particles_)
      if (!(pr.mass > 0.0))
        throw std::invalid_argument("particle_system: mass must be positive");
    for (const auto& f : fields_)
      if (!f)
        throw std::invalid_argument("particle_system: null field model");
  }

  static particle_system single(std::shared_ptr<const field_model> field,
                                particle_props props = {}) {
    return particle_system({props}, {std::move(field)});
  }

  std::size_t size() const { return particles_.size(); }
  const particle_props& props(std::size_t j) const { return particles_[j]; }
  const field_model& field(std::size_t j) const { return *fields_[j]; }
  std::shared_ptr<const field_model> field_ptr(std::size_t j) const {
    return fields_[j];
  }
  const interaction* coupling() const { return coupling_.get(); }
  std::shared_ptr<const interaction> coupling_ptr() const { return coupling_; }

 private:
  std::vector<particle_props> particles_;
  std::vector<std::shared_ptr<const field_model>> fields_;
  std::shared_ptr<const interaction> coupling_;
};

// f(q,t) = e^2 |A(q,t)|^2 / (2m) + e phi(q,t), the position-dependent part
// of the field Hamiltonian seen by one particle.
inline double effective_potential(const field_model& field,
                                  const particle_props& props, const vec3& q,
                                  double t) {
  const vec3 a = field.vector_potential(q, t);
  return props.charge * props.charge / (2.0 * props.mass) * dot(a, a) +
         props.charge * field.scalar_potential(q, t);
}

// Row vector (e^2/m) A A' + e grad(phi), the exact gradient of the above.
inline vec3 effective_potential_gradient(const field_model& field,
                                         const particle_props& props,
                                         const vec3& q, double t) {
  const vec3 a = field.vector_potential(q, t);
  const mat3 jac = field.vector_potential_jacobian(q, t);
  return (props.charge * props.charge / props.mass) * (a * jac) +
         props.charge * field.scalar_potential_gradient(q, t);
}

// Total f over the system at a joint configuration, interaction included.
inline double total_effective_potential(const particle_system& sys,
                                        std::span<const vec3> q, double t) {
  double f = 0.0;
  for (std::size_t j = 0; j < sys.size(); ++j)
    f += effective_potential(sys.field(j), sys.props(j), q[j], t);
  if (sys.coupling()) f += sys.coupling()->value(q, t);
  return f;
}

}  // namespace essrk
