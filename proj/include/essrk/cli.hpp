#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "essrk/consistency.hpp"
#include "essrk/csv.hpp"
#include "essrk/diagnostics.hpp"
#include "essrk/errors.hpp"
#include "essrk/experiments.hpp"
#include "essrk/integrate.hpp"
#include "essrk/parametric_field.hpp"
#include "essrk/tokamak_field.hpp"

namespace essrk::cli {

// Exit codes, also documented in the README:
//   0 success
//   2 unknown preset
//   3 malformed config or flags
//   4 step failure (field domain violation or singular momentum update)
//   5 diagnostic or convergence check failed
enum exit_code : int {
  ok = 0,
  unknown_preset = 2,
  bad_config = 3,
  step_failure = 4,
  check_failure = 5,
};

class config_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class unknown_preset_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using option_map = std::map<std::string, std::string>;

// Flat key = value lines; '#' starts a comment. Unknown keys are rejected
// so typos fail loudly. Flag values override file values.
inline option_map load_config_file(const std::string& path) {
  static const std::vector<std::string> known = {
      "preset", "field", "method", "h", "steps", "stride", "out",
      "omega", "epsilon", "kappa", "b0", "e0", "major-radius",
      "safety-factor", "ax", "ay", "az", "charge", "mass",
      "q0", "p0", "t0", "fd-derivatives", "h-list", "final-time"};
  std::ifstream in(path);
  if (!in) throw config_error("cannot open config file '" + path + "'");
  option_map opts;
  std::string line;
  std::size_t line_no = 0;
  const auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    const auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos)
      line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw config_error(path + ":" + std::to_string(line_no) +
                         ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (std::find(known.begin(), known.end(), key) == known.end())
      throw config_error(path + ":" + std::to_string(line_no) +
                         ": unknown key '" + key + "'");
    opts[key] = value;
  }
  return opts;
}

inline double parse_double(const std::string& text, const std::string& key) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(text, &pos);
    if (pos != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw config_error("bad numeric value '" + text + "' for " + key);
  }
}

inline std::size_t parse_count(const std::string& text, const std::string& key) {
  const double v = parse_double(text, key);
  if (v < 0 || v != std::floor(v))
    throw config_error("expected a nonnegative integer for " + key);
  return static_cast<std::size_t>(v);
}

inline vec3 parse_vec3(const std::string& text, const std::string& key) {
  std::stringstream ss(text);
  std::string part;
  vec3 v;
  std::size_t i = 0;
  while (std::getline(ss, part, ',')) {
    if (i >= 3) throw config_error("expected three components for " + key);
    v[i++] = parse_double(part, key);
  }
  if (i != 3) throw config_error("expected three components for " + key);
  return v;
}

inline std::vector<double> parse_double_list(const std::string& text,
                                             const std::string& key) {
  std::stringstream ss(text);
  std::string part;
  std::vector<double> values;
  while (std::getline(ss, part, ','))
    values.push_back(parse_double(part, key));
  return values;
}

// A fully materialized run: system, initial state, method, and step plan.
struct run_setup {
  particle_system system;
  phase_state initial;
  method_spec method;
  double h = 0.0;
  std::size_t steps = 0;
  std::size_t stride = 1;
  std::string out;
  std::optional<experiment_preset> preset;
  std::optional<double> fd_wrap;  // wrap fields in the FD-derivative adapter
};

inline std::shared_ptr<const field_model> wrap_fd(
    std::shared_ptr<const field_model> field, double step) {
  auto a = [field](const vec3& q, double t) {
    return field->vector_potential(q, t);
  };
  auto phi = [field](const vec3& q, double t) {
    return field->scalar_potential(q, t);
  };
  return std::make_shared<finite_difference_field>(a, phi, step);
}

inline run_setup build_setup(const option_map& opts) {
  const auto get = [&](const std::string& key) -> std::optional<std::string> {
    const auto it = opts.find(key);
    if (it == opts.end()) return std::nullopt;
    return it->second;
  };

  std::optional<experiment_preset> preset;
  if (const auto name = get("preset")) {
    const double omega = get("omega") ? parse_double(*get("omega"), "omega") : 1.0;
    const double kappa = get("kappa") ? parse_double(*get("kappa"), "kappa") : 0.1;
    try {
      preset = preset_by_name(*name, omega, kappa);
    } catch (const std::invalid_argument& e) {
      throw unknown_preset_error(e.what());
    }
  }

  particle_props props{get("charge") ? parse_double(*get("charge"), "charge") : 1.0,
                       get("mass") ? parse_double(*get("mass"), "mass") : 1.0};
  if (!(props.mass > 0.0)) throw config_error("mass must be positive");

  std::optional<particle_system> system;
  std::optional<phase_state> initial;
  if (preset) {
    if (get("field"))
      throw config_error("give either a preset or an inline field, not both");
    system = preset->system;
    initial = preset->initial;
  } else if (const auto kind = get("field")) {
    std::shared_ptr<const field_model> field;
    if (*kind == "zero") {
      field = std::make_shared<zero_field>();
    } else if (*kind == "uniform") {
      field = std::make_shared<uniform_field>(
          vec3{get("ax") ? parse_double(*get("ax"), "ax") : 0.0,
               get("ay") ? parse_double(*get("ay"), "ay") : 0.0,
               get("az") ? parse_double(*get("az"), "az") : 0.0});
    } else if (*kind == "parametric") {
      field = std::make_shared<parametric_field>(
          get("epsilon") ? parse_double(*get("epsilon"), "epsilon") : 1e-4,
          get("omega") ? parse_double(*get("omega"), "omega") : 1.0);
    } else if (*kind == "tokamak") {
      field = std::make_shared<tokamak_field>(
          get("b0") ? parse_double(*get("b0"), "b0") : 1.0,
          get("e0") ? parse_double(*get("e0"), "e0") : 1e-2,
          get("major-radius") ? parse_double(*get("major-radius"), "major-radius") : 2.0,
          get("safety-factor") ? parse_double(*get("safety-factor"), "safety-factor") : 5.0);
    } else {
      throw config_error("unknown field kind '" + *kind +
                         "' (zero, uniform, parametric, tokamak)");
    }
    system = particle_system::single(field, props);
    initial = phase_state{{get("q0") ? parse_vec3(*get("q0"), "q0") : vec3{0.0, 2.1, 0.0}},
                          {get("p0") ? parse_vec3(*get("p0"), "p0") : vec3{}},
                          get("t0") ? parse_double(*get("t0"), "t0") : 0.0};
  } else {
    throw config_error("no preset and no inline field given");
  }

  method_spec method{method_spec::family::essrk, 4};
  if (const auto m = get("method")) {
    try {
      method = parse_method(*m);
    } catch (const std::invalid_argument& e) {
      throw config_error(e.what());
    }
  }

  // Preset step plans come from the matching method run when present.
  double h = 0.0;
  std::size_t steps = 0;
  if (preset) {
    const method_run* chosen = nullptr;
    for (const auto& run : preset->methods)
      if (!run.benchmark && run.method.label() == method.label()) chosen = &run;
    if (!chosen)
      for (const auto& run : preset->methods)
        if (!run.benchmark) {
          chosen = &run;
          break;
        }
    h = chosen->h;
    steps = chosen->n_steps;
  }
  if (const auto v = get("h")) h = parse_double(*v, "h");
  if (const auto v = get("steps")) steps = parse_count(*v, "steps");
  if (h == 0.0) throw config_error("step size h must be given and nonzero");

  run_setup setup{*std::move(system), *std::move(initial), method, h, steps, 1,
                  get("out").value_or(""), std::move(preset), std::nullopt};
  if (const auto v = get("stride")) {
    setup.stride = parse_count(*v, "stride");
    if (setup.stride < 1) throw config_error("stride must be >= 1");
  }
  if (const auto v = get("fd-derivatives")) {
    const double fd = parse_double(*v, "fd-derivatives");
    if (!(fd > 0.0)) throw config_error("fd-derivatives step must be positive");
    setup.fd_wrap = fd;
    std::vector<particle_props> ps;
    std::vector<std::shared_ptr<const field_model>> fs;
    for (std::size_t j = 0; j < setup.system.size(); ++j) {
      ps.push_back(setup.system.props(j));
      fs.push_back(wrap_fd(setup.system.field_ptr(j), fd));
    }
    setup.system = particle_system(std::move(ps), std::move(fs),
                                   setup.system.coupling_ptr());
  }
  return setup;
}

inline int cmd_simulate(const option_map& opts) {
  run_setup setup = build_setup(opts);
  if (setup.out.empty()) throw config_error("simulate needs an output path (out)");
  const trajectory traj =
      integrate(setup.initial, make_stepper(setup.method), setup.h, setup.steps,
                setup.system, setup.stride);
  std::ofstream out(setup.out, std::ios::binary);
  if (!out) throw config_error("cannot open output file '" + setup.out + "'");
  write_trajectory_csv(out, traj, setup.system);
  std::cout << "wrote " << traj.states.size() << " rows to " << setup.out
            << " (" << setup.method.label() << ", h = " << setup.h << ", "
            << setup.steps << " steps)\n";
  return ok;
}

inline int cmd_converge(const option_map& opts) {
  run_setup setup = build_setup(opts);
  const auto it = opts.find("h-list");
  if (it == opts.end())
    throw config_error("converge needs h-list (e.g. --h-list 0.4,0.2,0.1,0.05)");
  const std::vector<double> h_list = parse_double_list(it->second, "h-list");
  if (h_list.size() < 3) throw config_error("converge needs at least 3 step sizes");
  const double final_time =
      opts.count("final-time") ? parse_double(opts.at("final-time"), "final-time") : 10.0;

  const convergence_result res =
      convergence_order(make_stepper(setup.method), setup.system, setup.initial,
                        h_list, final_time);
  const int declared =
      setup.method.fam == method_spec::family::rk4 ? 4 : setup.method.order;

  std::cout << "method " << setup.method.label() << ", T = " << final_time << "\n";
  std::cout << "        h                error\n";
  for (std::size_t i = 0; i < res.step_sizes.size(); ++i)
    std::cout << "  " << format_double(res.step_sizes[i]) << "\t"
              << format_double(res.errors[i]) << "\n";
  if (!res.monotone)
    std::cout << "warning: errors are not monotone in h (outside the asymptotic regime?)\n";
  const bool pass = std::abs(res.slope - declared) <= 0.5;
  std::cout << "fitted slope " << format_double(res.slope) << " (declared order "
            << declared << "): " << (pass ? "PASS" : "FAIL") << "\n";
  return pass ? ok : check_failure;
}

inline int cmd_diagnose(const option_map& opts) {
  run_setup setup = build_setup(opts);
  const bool is_rk4 = setup.method.fam == method_spec::family::rk4;
  bool failed = false;
  const auto verdict = [&](bool pass, bool informational = false) {
    if (!pass && !informational) failed = true;
    return pass ? "PASS" : (informational ? "FAIL (informational)" : "FAIL");
  };

  // Field closed forms vs finite differences near the initial point.
  std::mt19937 rng(1234);
  std::uniform_real_distribution<double> jitter(-0.1, 0.1);
  std::vector<std::pair<vec3, double>> samples;
  samples.emplace_back(setup.initial.q[0], setup.initial.t);
  for (int i = 0; i < 9; ++i) {
    vec3 q = setup.initial.q[0];
    for (std::size_t d = 0; d < 3; ++d) q[d] += jitter(rng);
    samples.emplace_back(q, setup.initial.t + 0.37 * i);
  }
  magnetic_reference b_ref;
  if (const auto* tok = dynamic_cast<const tokamak_field*>(&setup.system.field(0)))
    b_ref = [tok](const vec3& q, double) { return tok->magnetic_field(q); };
  const field_check_report fc =
      field_consistency_check(setup.system.field(0), samples, b_ref);
  const double field_tol = 1e-5;
  std::cout << "field consistency    jacobian " << format_double(fc.jacobian_defect)
            << "  phi-grad " << format_double(fc.potential_gradient_defect)
            << "  div " << format_double(fc.divergence_defect);
  if (fc.curl_defect) std::cout << "  curl " << format_double(*fc.curl_defect);
  std::cout << "  " << verdict(fc.max_defect() <= field_tol) << " (tol "
            << field_tol << ")\n";

  // One step of the configured method must be symplectic -- unless the
  // method is the rk4 baseline, where failing this check is the point.
  const step_fn stepper = make_stepper(setup.method);
  const phase_map one_step = [&](const phase_state& s) {
    phase_state out = s;
    stepper(out, setup.h, setup.system);
    return out;
  };
  const double defect = symplecticity_defect(one_step, setup.initial);
  const double defect_tol = 1e-5;
  std::cout << "symplecticity        defect " << format_double(defect) << "  "
            << verdict(defect <= defect_tol, is_rk4) << " (tol " << defect_tol
            << ", " << setup.method.label() << ", h = " << setup.h << ")\n";

  // Closed-form momentum recovery along the H2 flow over a unit interval.
  const double shadow = shadowing_residual(setup.system, setup.initial,
                                           setup.initial.t, setup.initial.t + 1.0);
  const double shadow_tol = 1e-4;
  std::cout << "shadowing            residual " << format_double(shadow) << "  "
            << verdict(shadow <= shadow_tol) << " (tol " << shadow_tol << ")\n";

  // Action-integral order: halving h must shrink the residual ~2^(p+1).
  const butcher_tableau& tab =
      is_rk4 ? rk4_tableau() : tableau_for_order(setup.method.order);
  const double qh = setup.h;
  const double r1 = action_quadrature_residual(setup.system, setup.initial, tab, qh);
  const double r2 = action_quadrature_residual(setup.system, setup.initial, tab, qh / 2.0);
  const double ratio = r2 > 0.0 ? r1 / r2 : std::numeric_limits<double>::infinity();
  const double expected = std::pow(2.0, tab.order() + 1);
  const bool quad_pass = std::abs(ratio / expected - 1.0) <= 0.2;
  std::cout << "action quadrature    ratio " << format_double(ratio)
            << " vs 2^" << tab.order() + 1 << " = " << format_double(expected)
            << "  " << verdict(quad_pass) << " (tol 20%)\n";

  return failed ? check_failure : ok;
}

inline std::string with_label(const std::string& path, const std::string& label) {
  const auto slash = path.find_last_of('/');
  const auto dot = path.find_last_of('.');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash))
    return path + "." + label + ".csv";
  return path.substr(0, dot) + "." + label + path.substr(dot);
}

inline int cmd_compare(const option_map& opts) {
  const auto it = opts.find("preset");
  if (it == opts.end()) throw config_error("compare needs a preset");
  const double omega =
      opts.count("omega") ? parse_double(opts.at("omega"), "omega") : 1.0;
  const double kappa =
      opts.count("kappa") ? parse_double(opts.at("kappa"), "kappa") : 0.1;
  experiment_preset preset = [&] {
    try {
      return preset_by_name(it->second, omega, kappa);
    } catch (const std::invalid_argument& e) {
      throw unknown_preset_error(e.what());
    }
  }();

  const std::vector<comparison_entry> entries = run_comparison(preset);
  const std::string out = opts.count("out") ? opts.at("out") : "";
  std::cout << "preset " << preset.name << ", T = " << preset.horizon << "\n";
  for (const auto& e : entries) {
    std::cout << "  " << e.label << ": E(end) = " << format_double(e.final_energy)
              << ", final state error = " << format_double(e.final_state_error)
              << ", amplitude error = "
              << format_double(e.report.amplitude_error_series.back().second)
              << ", phase error = "
              << format_double(e.report.phase_error_series.back().second) << "\n";
    if (!out.empty()) {
      const std::string path = with_label(out, e.label);
      std::ofstream file(path, std::ios::binary);
      if (!file) throw config_error("cannot open output file '" + path + "'");
      write_error_series_csv(file, e.report);
      std::cout << "    wrote " << path << "\n";
    }
  }
  return ok;
}

// Builds the CLI and dispatches. `args` excludes the program name.
inline int run(const std::vector<std::string>& args) {
  CLI::App app{"explicit symplectic integrators for charged particles in "
               "general electromagnetic fields"};
  app.set_help_flag("--help", "print this help message and exit");
  app.require_subcommand(1);

  option_map flags;
  std::string config_path;
  const auto add_common = [&](CLI::App* cmd) {
    cmd->set_help_flag("--help", "print this help message and exit");
    cmd->add_option("--config", config_path, "flat key = value config file");
    for (const char* key :
         {"preset", "field", "method", "h", "steps", "stride", "out", "omega",
          "epsilon", "kappa", "b0", "e0", "major-radius", "safety-factor",
          "ax", "ay", "az", "charge", "mass", "q0", "p0", "t0",
          "fd-derivatives"}) {
      cmd->add_option_function<std::string>(
          std::string("--") + key,
          [&flags, key](const std::string& v) { flags[key] = v; });
    }
  };

  CLI::App* simulate = app.add_subcommand("simulate", "integrate and write a trajectory CSV");
  add_common(simulate);
  CLI::App* converge = app.add_subcommand("converge", "measure the global convergence order");
  add_common(converge);
  converge->add_option_function<std::string>(
      "--h-list", [&flags](const std::string& v) { flags["h-list"] = v; },
      "comma-separated step sizes");
  converge->add_option_function<std::string>(
      "--final-time", [&flags](const std::string& v) { flags["final-time"] = v; });
  CLI::App* diagnose = app.add_subcommand("diagnose", "run the oracle checks");
  add_common(diagnose);
  CLI::App* compare = app.add_subcommand("compare", "run every preset method against the benchmark");
  add_common(compare);

  std::vector<std::string> full = args;
  full.insert(full.begin(), "essrk");
  std::vector<const char*> argv;
  argv.reserve(full.size());
  for (const auto& a : full) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return bad_config;
  }

  try {
    option_map opts;
    if (!config_path.empty()) opts = load_config_file(config_path);
    for (const auto& [k, v] : flags) opts[k] = v;  // flags win
    if (simulate->parsed()) return cmd_simulate(opts);
    if (converge->parsed()) return cmd_converge(opts);
    if (diagnose->parsed()) return cmd_diagnose(opts);
    return cmd_compare(opts);
  } catch (const unknown_preset_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return unknown_preset;
  } catch (const config_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return bad_config;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return bad_config;
  } catch (const step_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return step_failure;
  } catch (const field_domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return step_failure;
  } catch (const singular_update_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return step_failure;
  } catch (const std::runtime_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return step_failure;
  }
}

inline int run(int argc, const char* const* argv) {
  return run(std::vector<std::string>(argv + 1, argv + argc));
}

}  // namespace essrk::cli
