#pragma once

#include <cmath>
#include <cstddef>
#include <memory>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "essrk/diagnostics.hpp"
#include "essrk/errors.hpp"
#include "essrk/integrate.hpp"
#include "essrk/parametric_field.hpp"
#include "essrk/state.hpp"
#include "essrk/system.hpp"
#include "essrk/tokamak_field.hpp"

namespace essrk {

struct method_run {
  method_spec method;
  double h = 0.5;
  std::size_t n_steps = 0;
  bool benchmark = false;

  std::string label() const {
    return method.label() + (benchmark ? "-benchmark" : "");
  }
};

struct experiment_preset {
  std::string name;
  particle_system system;
  phase_state initial;
  double horizon = 0.0;
  std::vector<method_run> methods;
};

// Charged particle confined by the static toroidal field, with the
// oscillating-in-z electric potential turned on: B0 = 1, E0 = 1e-2, R = 2,
// Q = 5, e = m = 1, q(0) = [0, 2.1, 0], p(0) = 0. Compared methods: essrk4
// and rk4 at h = 0.5 over T = 1000, benchmarked by rk4 at h = 0.01.
inline experiment_preset tokamak_preset() {
  auto field = std::make_shared<tokamak_field>(1.0, 1e-2, 2.0, 5.0);
  return {"paper-tokamak",
          particle_system::single(field),
          {{{0.0, 2.1, 0.0}}, {{0.0, 0.0, 0.0}}, 0.0},
          1000.0,
          {{{method_spec::family::essrk, 4}, 0.5, 2000, false},
           {{method_spec::family::rk4, 4}, 0.5, 2000, false},
           {{method_spec::family::rk4, 4}, 0.01, 100000, true}}};
}

// Parametric resonance of the gyration: B(t) = 1 + epsilon sin(omega t)
// with epsilon = 1e-4, run to T = 1/(2 epsilon) = 5000 at h = 0.25. At
// omega = 1 the particle energy grows like exp(epsilon t / 2); the rk4
// h = 0.001 run is the error benchmark.
inline experiment_preset parametric_preset(double omega = 1.0) {
  auto field = std::make_shared<parametric_field>(1e-4, omega);
  return {"paper-parametric",
          particle_system::single(field),
          {{{0.0, 2.1, 0.0}}, {{0.0, 0.0, 0.0}}, 0.0},
          5000.0,
          {{{method_spec::family::essrk, 4}, 0.25, 20000, false},
           {{method_spec::family::rk4, 4}, 0.25, 20000, false},
           {{method_spec::family::rk4, 4}, 0.001, 5000000, true}}};
}

// Two particles in the uniform static field (parametric field with
// epsilon = 0) coupled by a harmonic interaction; exercises the
// block-diagonal momentum update and the grad(V) coupling without
// collision singularities. kappa = 0 decouples the particles exactly.
inline experiment_preset ensemble_preset(double kappa = 0.1) {
  auto field = std::make_shared<parametric_field>(0.0, 1.0);
  std::shared_ptr<const interaction> coupling;
  if (kappa != 0.0) coupling = std::make_shared<harmonic_interaction>(kappa);
  particle_system sys({particle_props{}, particle_props{}}, {field, field},
                      coupling);
  return {"ensemble",
          std::move(sys),
          {{{0.0, 2.1, 0.0}, {1.5, -0.5, 0.3}},
           {{0.0, 0.0, 0.0}, {0.1, -0.05, 0.2}},
           0.0},
          250.0,
          {{{method_spec::family::essrk, 4}, 0.25, 1000, false},
           {{method_spec::family::rk4, 4}, 0.25, 1000, false},
           {{method_spec::family::rk4, 4}, 0.005, 50000, true}}};
}

inline experiment_preset preset_by_name(const std::string& name,
                                        double omega = 1.0,
                                        double kappa = 0.1) {
  if (name == "paper-tokamak") return tokamak_preset();
  if (name == "paper-parametric") return parametric_preset(omega);
  if (name == "ensemble") return ensemble_preset(kappa);
  throw std::invalid_argument("unknown preset '" + name + "'");
}

struct comparison_entry {
  std::string label;
  method_run run;
  diagnostics_report report;
  double final_energy = 0.0;
  double final_state_error = 0.0;  // inf-norm vs benchmark at the horizon
};

// Runs every method of the preset and measures benchmark-relative
// amplitude, phase, and energy series on the coarse time grid. The phase
// error is the wrapped angular difference. Aborts with the method label
// and step index on a step failure.
inline std::vector<comparison_entry> run_comparison(
    const experiment_preset& preset) {
  const method_run* bench = nullptr;
  for (const auto& m : preset.methods)
    if (m.benchmark) {
      if (bench)
        throw std::invalid_argument("run_comparison: multiple benchmarks");
      bench = &m;
    }
  if (!bench)
    throw std::invalid_argument("run_comparison: preset has no benchmark run");

  double coarse_h = 0.0;
  for (const auto& m : preset.methods)
    if (!m.benchmark) {
      if (coarse_h == 0.0)
        coarse_h = m.h;
      else if (m.h != coarse_h)
        throw std::invalid_argument(
            "run_comparison: non-benchmark methods must share a step size");
    }
  const auto bench_stride = static_cast<std::size_t>(
      std::llround(coarse_h / bench->h));
  if (std::abs(bench_stride * bench->h - coarse_h) > 1e-9 * coarse_h)
    throw std::invalid_argument(
        "run_comparison: benchmark step must divide the coarse step");

  const auto run_method = [&](const method_run& m, std::size_t stride) {
    try {
      return integrate(preset.initial, make_stepper(m.method), m.h, m.n_steps,
                       preset.system, stride);
    } catch (const step_error& e) {
      throw std::runtime_error("method '" + m.label() + "' aborted at step " +
                               std::to_string(e.step()) + ": " + e.what());
    }
  };

  const trajectory bench_traj = run_method(*bench, bench_stride);
  std::vector<velocity_polar> bench_polar;
  bench_polar.reserve(bench_traj.states.size());
  for (const auto& s : bench_traj.states)
    bench_polar.push_back(guiding_center_decompose(s, preset.system));

  std::vector<comparison_entry> entries;
  for (const auto& m : preset.methods) {
    const trajectory traj = m.benchmark ? bench_traj : run_method(m, 1);
    if (traj.states.size() != bench_traj.states.size())
      throw std::runtime_error("run_comparison: trajectory grids disagree");

    comparison_entry entry;
    entry.label = m.label();
    entry.run = m;
    for (std::size_t i = 0; i < traj.states.size(); ++i) {
      const phase_state& s = traj.states[i];
      const velocity_polar polar = guiding_center_decompose(s, preset.system);
      const double phase_diff = std::abs(std::remainder(
          polar.phase - bench_polar[i].phase, 2.0 * std::numbers::pi));
      entry.report.energy_series.emplace_back(s.t, energy(s, preset.system));
      entry.report.amplitude_error_series.emplace_back(
          s.t, std::abs(polar.amplitude - bench_polar[i].amplitude));
      entry.report.phase_error_series.emplace_back(s.t, phase_diff);
    }
    entry.final_energy = entry.report.energy_series.back().second;
    const std::vector<double> zf = flatten(traj.final_state());
    const std::vector<double> zb = flatten(bench_traj.final_state());
    for (std::size_t i = 0; i < zf.size(); ++i)
      entry.final_state_error =
          std::max(entry.final_state_error, std::abs(zf[i] - zb[i]));
    entries.push_back(std::move(entry));
  }
  return entries;
}

}  // namespace essrk
