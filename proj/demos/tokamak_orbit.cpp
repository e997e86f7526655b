// Long confined orbit in the tokamak field: the symplectic method keeps the
// energy bounded at a step size where plain RK4 visibly dissipates.

#include <cstdio>

#include "essrk/diagnostics.hpp"
#include "essrk/experiments.hpp"
#include "essrk/integrate.hpp"

int main() {
  using namespace essrk;

  const experiment_preset preset = tokamak_preset();
  const double h = 0.5;
  const std::size_t steps = 2000;  // T = 1000
  const double e0 = energy(preset.initial, preset.system);

  const trajectory sym = integrate(preset.initial, make_essrk_stepper(4), h,
                                   steps, preset.system, 100);
  const trajectory rk = integrate(preset.initial, make_rk4_stepper(), h, steps,
                                  preset.system, 100);

  std::printf("# t        E(essrk4)-E0      E(rk4)-E0\n");
  for (std::size_t i = 0; i < sym.states.size(); ++i)
    std::printf("%8.1f  %+.6e  %+.6e\n", sym.states[i].t,
                energy(sym.states[i], preset.system) - e0,
                energy(rk.states[i], preset.system) - e0);
  return 0;
}
