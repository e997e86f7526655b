#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "essrk/baseline.hpp"
#include "essrk/composition.hpp"
#include "essrk/errors.hpp"
#include "essrk/state.hpp"
#include "essrk/system.hpp"

namespace essrk {

// A stepper advances the state by one step of size h. Steppers are pure:
// distinct trajectories may be advanced concurrently without coordination.
using step_fn = std::function<void(phase_state&, double, const particle_system&)>;

struct method_spec {
  enum class family { essrk, rk4 };

  family fam = family::essrk;
  int order = 4;  // meaningful for essrk only

  std::string label() const {
    return fam == family::rk4 ? "rk4" : "essrk" + std::to_string(order);
  }
};

// Accepts "rk4" and "essrk<p>" with even p (e.g. essrk2, essrk4, essrk6).
inline method_spec parse_method(std::string_view text) {
  if (text == "rk4") return {method_spec::family::rk4, 4};
  if (text.starts_with("essrk")) {
    const std::string digits(text.substr(5));
    if (!digits.empty() &&
        digits.find_first_not_of("0123456789") == std::string::npos) {
      const int p = std::stoi(digits);
      if (p >= 2 && p % 2 == 0) return {method_spec::family::essrk, p};
    }
  }
  throw std::invalid_argument("unknown method '" + std::string(text) +
                              "' (expected rk4 or essrk<even order>)");
}

inline step_fn make_essrk_stepper(int p, const butcher_tableau& tab) {
  auto schedule = std::make_shared<composition_schedule>(
      composition_schedule::build(p));
  auto tableau = std::make_shared<butcher_tableau>(tab);
  return [schedule, tableau](phase_state& s, double h,
                             const particle_system& sys) {
    essrk_step(s, *schedule, *tableau, h, sys);
  };
}

inline step_fn make_essrk_stepper(int p) {
  return make_essrk_stepper(p, tableau_for_order(p));
}

inline step_fn make_rk4_stepper() {
  return [](phase_state& s, double h, const particle_system& sys) {
    rk4_baseline_step(s, h, sys);
  };
}

inline step_fn make_stepper(const method_spec& m) {
  return m.fam == method_spec::family::rk4 ? make_rk4_stepper()
                                           : make_essrk_stepper(m.order);
}

using observer_fn = std::function<void(std::size_t, const phase_state&)>;

struct trajectory {
  std::vector<phase_state> states;
  std::vector<std::size_t> step_indices;

  const phase_state& final_state() const { return states.back(); }
};

// Applies the stepper n_steps times from the initial state. Records the
// initial state, every stride-th step, and the final step. The observer,
// when given, fires after every step regardless of the stride. A stepper
// failure aborts as step_error carrying the 1-based step index.
inline trajectory integrate(phase_state state, const step_fn& step, double h,
                            std::size_t n_steps, const particle_system& sys,
                            std::size_t stride = 1,
                            const observer_fn& observe = {}) {
  if (stride == 0) throw std::invalid_argument("integrate: stride must be >= 1");
  trajectory traj;
  traj.states.push_back(state);
  traj.step_indices.push_back(0);
  for (std::size_t i = 1; i <= n_steps; ++i) {
    try {
      step(state, h, sys);
    } catch (const step_error&) {
      throw;
    } catch (const std::exception& e) {
      throw step_error(i, e.what());
    }
    if (observe) observe(i, state);
    if (i % stride == 0 || i == n_steps) {
      traj.states.push_back(state);
      traj.step_indices.push_back(i);
    }
  }
  return traj;
}

}  // namespace essrk
