#include <catch2/catch.hpp>

#include <random>

#include "essrk/linalg.hpp"
#include "test_util.hpp"

using namespace essrk;

TEST_CASE("row-vector times matrix follows the dA_i/dq_j convention",
          "[linalg]") {
  mat3 m;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) m(i, j) = 1.0 + 3.0 * i + j;
  const vec3 v{2.0, -1.0, 0.5};
  const vec3 r = v * m;
  for (std::size_t j = 0; j < 3; ++j) {
    double expected = 0.0;
    for (std::size_t i = 0; i < 3; ++i) expected += v[i] * m(i, j);
    REQUIRE(r[j] == Approx(expected).margin(1e-15));
  }
}

TEST_CASE("adjugate inverse round-trips random matrices", "[linalg]") {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    mat3 m = mat3::identity();
    for (std::size_t i = 0; i < 9; ++i)
      m.m[i] += testutil::uniform(rng, -0.4, 0.4);
    const auto inv = try_inverse(m, 1e-12);
    REQUIRE(inv.has_value());
    REQUIRE(max_abs(m * *inv - mat3::identity()) < 1e-12);
    REQUIRE(max_abs(*inv * m - mat3::identity()) < 1e-12);
  }
}

TEST_CASE("inverse refuses singular matrices", "[linalg]") {
  mat3 m = mat3::identity();
  m(1, 1) = 0.0;
  REQUIRE_FALSE(try_inverse(m, 1e-12).has_value());
  m(1, 1) = 1e-13;
  REQUIRE_FALSE(try_inverse(m, 1e-12).has_value());
}

TEST_CASE("cross product is orthogonal to its factors", "[linalg]") {
  std::mt19937 rng(12);
  for (int trial = 0; trial < 20; ++trial) {
    const vec3 a = testutil::random_vec3(rng, -2.0, 2.0);
    const vec3 b = testutil::random_vec3(rng, -2.0, 2.0);
    const vec3 c = cross(a, b);
    REQUIRE(dot(a, c) == Approx(0.0).margin(1e-12));
    REQUIRE(dot(b, c) == Approx(0.0).margin(1e-12));
  }
}
