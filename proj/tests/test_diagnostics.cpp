#include <catch2/catch.hpp>

#include <cmath>
#include <memory>
#include <random>

#include "essrk/baseline.hpp"
#include "essrk/diagnostics.hpp"
#include "essrk/integrate.hpp"
#include "essrk/parametric_field.hpp"
#include "essrk/splitting.hpp"
#include "essrk/tokamak_field.hpp"
#include "test_util.hpp"

using namespace essrk;

TEST_CASE("energy of the parametric preset initial condition", "[diagnostics]") {
  auto sys = particle_system::single(std::make_shared<parametric_field>(1e-4, 1.0));
  const phase_state s{{{0.0, 2.1, 0.0}}, {{0.0, 0.0, 0.0}}, 0.0};
  REQUIRE(energy(s, sys) == Approx(0.55125).epsilon(1e-15));
}

TEST_CASE("energy is kinetic only when the field vanishes", "[diagnostics]") {
  auto sys = particle_system::single(std::make_shared<zero_field>());
  const phase_state s{{{7.0, -1.0, 2.0}}, {{3.0, 0.0, 0.0}}, 1.0};
  REQUIRE(energy(s, sys) == 4.5);
}

TEST_CASE("energy stays constant along a uniform-B trajectory",
          "[diagnostics]") {
  auto sys = particle_system::single(std::make_shared<parametric_field>(0.0, 1.0));
  phase_state s{{{0.0, 2.1, 0.0}}, {{0.0, 0.0, 0.0}}, 0.0};
  const double e0 = energy(s, sys);
  const step_fn step = make_essrk_stepper(4);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    step(s, 0.1, sys);
    worst = std::max(worst, std::abs(energy(s, sys) - e0) / e0);
  }
  REQUIRE(worst < 1e-6);
}

TEST_CASE("symplecticity defect of the identity map is FD noise",
          "[diagnostics]") {
  std::mt19937 rng(61);
  const phase_state s = testutil::random_state(rng);
  const double defect =
      symplecticity_defect([](const phase_state& x) { return x; }, s);
  REQUIRE(defect < 1e-9);
}

TEST_CASE("kick defect stays at noise level even for large steps",
          "[diagnostics]") {
  auto sys = particle_system::single(std::make_shared<tokamak_field>(1.0, 1e-2, 2.0, 5.0));
  std::mt19937 rng(62);
  const phase_state s = testutil::random_state(rng);
  for (double h : {0.05, 0.5}) {
    const double defect = symplecticity_defect(
        [&](const phase_state& x) {
          phase_state y = x;
          kick(y, rk4_tableau(), h, sys);
          return y;
        },
        s);
    REQUIRE(defect < 1e-5);
  }
}

TEST_CASE("the rk4 baseline has a measurably positive defect",
          "[diagnostics]") {
  auto sys = particle_system::single(std::make_shared<parametric_field>(1e-4, 1.0));
  std::mt19937 rng(63);
  const phase_state s = testutil::random_state(rng);
  const double defect = symplecticity_defect(
      [&](const phase_state& x) {
        phase_state y = x;
        rk4_baseline_step(y, 0.25, sys);
        return y;
      },
      s);
  // regression baseline: measured ~3e-6 at h = 0.25 on this field
  REQUIRE(defect > 1e-7);
  REQUIRE(defect < 1e-4);
}

TEST_CASE("convergence slopes recover the declared orders", "[diagnostics]") {
  const std::vector<double> hs{0.4, 0.2, 0.1, 0.05};
  auto par = particle_system::single(std::make_shared<parametric_field>(1e-4, 1.0));
  auto tok = particle_system::single(std::make_shared<tokamak_field>(1.0, 1e-2, 2.0, 5.0));
  const phase_state init{{{0.0, 2.1, 0.0}}, {{0.0, 0.0, 0.0}}, 0.0};

  const auto r2 = convergence_order(make_essrk_stepper(2), par, init, hs, 10.0);
  REQUIRE(r2.slope == Approx(2.0).margin(0.2));
  REQUIRE(r2.monotone);

  const auto r4 = convergence_order(make_essrk_stepper(4), tok, init, hs, 10.0);
  REQUIRE(r4.slope == Approx(4.0).margin(0.2));
  REQUIRE(r4.monotone);

  const auto rb = convergence_order(make_rk4_stepper(), tok, init, hs, 10.0);
  REQUIRE(rb.slope == Approx(4.0).margin(0.2));

  REQUIRE_THROWS_AS(
      convergence_order(make_rk4_stepper(), tok, init,
                        std::vector<double>{0.2, 0.1}, 10.0),
      std::invalid_argument);
}

TEST_CASE("flat errors are flagged as non-monotone", "[diagnostics]") {
  auto sys = particle_system::single(std::make_shared<zero_field>());
  const phase_state init{{{0.0, 0.0, 0.0}}, {{1.0, 0.0, 0.0}}, 0.0};
  // every method is exact on free flight, so the errors sit at round-off
  const auto r = convergence_order(make_rk4_stepper(), sys, init,
                                   std::vector<double>{0.4, 0.2, 0.1}, 10.0);
  REQUIRE_FALSE(r.monotone);
}

TEST_CASE("guiding-center decomposition uses v1 = v sin, v2 = v cos",
          "[diagnostics]") {
  auto sys = particle_system::single(std::make_shared<zero_field>());
  const auto polar_of = [&](const vec3& v) {
    const phase_state s{{{0.0, 0.0, 0.0}}, {v}, 0.0};
    return guiding_center_decompose(s, sys);
  };
  auto p = polar_of({0.0, 1.0, 0.0});
  REQUIRE(p.amplitude == Approx(1.0));
  REQUIRE(p.phase == Approx(0.0).margin(1e-15));
  p = polar_of({1.0, 0.0, 0.0});
  REQUIRE(p.amplitude == Approx(1.0));
  REQUIRE(p.phase == Approx(M_PI / 2.0));
  p = polar_of({0.0, 0.0, 0.4});
  REQUIRE(p.amplitude == 0.0);
  REQUIRE(p.phase == 0.0);
}

TEST_CASE("the parametric initial state decomposes to (1.05, -pi/2)",
          "[diagnostics]") {
  auto sys = particle_system::single(std::make_shared<parametric_field>(1e-4, 1.0));
  const phase_state s{{{0.0, 2.1, 0.0}}, {{0.0, 0.0, 0.0}}, 0.0};
  const auto p = guiding_center_decompose(s, sys);
  REQUIRE(p.amplitude == Approx(1.05).epsilon(1e-15));
  REQUIRE(p.phase == Approx(-M_PI / 2.0).epsilon(1e-15));
}

TEST_CASE("polar decomposition round-trips to round-off", "[diagnostics]") {
  auto sys = particle_system::single(std::make_shared<parametric_field>(1e-4, 1.0));
  std::mt19937 rng(64);
  for (int trial = 0; trial < 30; ++trial) {
    const phase_state s = testutil::random_state(rng, 1.0, 1.0,
                                                 testutil::uniform(rng, 0, 9));
    const auto polar = guiding_center_decompose(s, sys);
    const vec3 v = s.p[0] - sys.field(0).vector_potential(s.q[0], s.t);
    REQUIRE(polar.amplitude * std::sin(polar.phase) ==
            Approx(v[0]).margin(1e-14));
    REQUIRE(polar.amplitude * std::cos(polar.phase) ==
            Approx(v[1]).margin(1e-14));
  }
}

TEST_CASE("shadowing recovers the momentum along the H2 flow",
          "[diagnostics]") {
  const phase_state init{{{0.0, 2.1, 0.0}}, {{0.1, -0.2, 0.3}}, 0.0};

  auto zero = particle_system::single(std::make_shared<zero_field>());
  // zero up to FD noise: the flow-map Jacobian is differenced numerically
  REQUIRE(shadowing_residual(zero, init, 0.0, 1.0) < 1e-10);

  auto par = particle_system::single(std::make_shared<parametric_field>(1e-4, 1.0));
  REQUIRE(shadowing_residual(par, init, 0.0, 1.0) < 1e-4);

  auto tok = particle_system::single(std::make_shared<tokamak_field>(1.0, 1e-2, 2.0, 5.0));
  REQUIRE(shadowing_residual(tok, init, 0.0, 0.5) < 1e-4);

  // residual shrinks as the reference and FD resolutions improve
  const double coarse = shadowing_residual(tok, init, 0.0, 1.0, 100, 1e-3);
  const double fine = shadowing_residual(tok, init, 0.0, 1.0, 1000, 1e-5);
  REQUIRE(fine < coarse);
}

TEST_CASE("action increment is exact for a constant field", "[diagnostics]") {
  auto sys = particle_system::single(
      std::make_shared<uniform_field>(vec3{0.7, 0.0, 0.0}));
  const phase_state s{{{1.0, 2.0, 3.0}}, {{0.1, 0.2, 0.3}}, 0.0};
  // f is constant, so both c(q) and the integral equal h f
  REQUIRE(action_quadrature_residual(sys, s, rk4_tableau(), 0.6) < 1e-14);
}

TEST_CASE("action residual scales as 2^(p+1) under step halving",
          "[diagnostics]") {
  auto sys = particle_system::single(std::make_shared<parametric_field>(1e-4, 1.0));
  const phase_state s{{{0.4, 1.9, 0.2}}, {{0.1, -0.2, 0.05}}, 0.0};

  const double rk4_ratio =
      action_quadrature_residual(sys, s, rk4_tableau(), 0.4) /
      action_quadrature_residual(sys, s, rk4_tableau(), 0.2);
  REQUIRE(rk4_ratio == Approx(32.0).epsilon(0.2));

  const double rk2_ratio =
      action_quadrature_residual(sys, s, midpoint_tableau(), 0.4) /
      action_quadrature_residual(sys, s, midpoint_tableau(), 0.2);
  REQUIRE(rk2_ratio == Approx(8.0).epsilon(0.2));
}
