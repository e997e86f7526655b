#pragma once

// Umbrella header: explicit symplectic integrators of arbitrary even order
// for non-relativistic charged particles in general (possibly
// time-dependent) electromagnetic fields.

#include "essrk/baseline.hpp"
#include "essrk/butcher.hpp"
#include "essrk/composition.hpp"
#include "essrk/consistency.hpp"
#include "essrk/csv.hpp"
#include "essrk/diagnostics.hpp"
#include "essrk/errors.hpp"
#include "essrk/experiments.hpp"
#include "essrk/field.hpp"
#include "essrk/integrate.hpp"
#include "essrk/linalg.hpp"
#include "essrk/parametric_field.hpp"
#include "essrk/splitting.hpp"
#include "essrk/state.hpp"
#include "essrk/system.hpp"
#include "essrk/tokamak_field.hpp"
