#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace essrk {

// A field was evaluated outside its stated domain (e.g. the tokamak axis).
class field_domain_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The momentum-update matrix I + h sum_i b_i k'_i of some particle lost
// invertibility. The remedy is a smaller step size.
class singular_update_error : public std::runtime_error {
 public:
  singular_update_error(std::size_t particle, double determinant)
      : std::runtime_error("singular momentum update for particle " +
                           std::to_string(particle) +
                           " (det = " + std::to_string(determinant) +
                           "); reduce the step size"),
        particle_(particle),
        determinant_(determinant) {}

  std::size_t particle() const { return particle_; }
  double determinant() const { return determinant_; }

 private:
  std::size_t particle_;
  double determinant_;
};

// A stepper failed inside integrate(); carries the 1-based step index.
class step_error : public std::runtime_error {
 public:
  step_error(std::size_t step, const std::string& cause)
      : std::runtime_error("step " + std::to_string(step) + " failed: " + cause),
        step_(step) {}

  std::size_t step() const { return step_; }

 private:
  std::size_t step_;
};

}  // namespace essrk
