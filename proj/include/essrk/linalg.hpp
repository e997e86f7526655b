#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <optional>

namespace essrk {

// Row-vector convention, used throughout the library: gradients are row
// vectors and Jacobians act by right multiplication, [J]_ij = df_i/dq_j,
// (v J)_j = sum_i v_i J_ij.
struct vec3 {
  std::array<double, 3> c{0.0, 0.0, 0.0};

  constexpr vec3() = default;
  constexpr vec3(double x, double y, double z) : c{x, y, z} {}

  constexpr double operator[](std::size_t i) const { return c[i]; }
  constexpr double& operator[](std::size_t i) { return c[i]; }

  constexpr vec3& operator+=(const vec3& o) {
    c[0] += o.c[0];
    c[1] += o.c[1];
    c[2] += o.c[2];
    return *this;
  }
  constexpr vec3& operator-=(const vec3& o) {
    c[0] -= o.c[0];
    c[1] -= o.c[1];
    c[2] -= o.c[2];
    return *this;
  }
  constexpr vec3& operator*=(double s) {
    c[0] *= s;
    c[1] *= s;
    c[2] *= s;
    return *this;
  }
  friend constexpr bool operator==(const vec3&, const vec3&) = default;
};

constexpr vec3 operator+(vec3 a, const vec3& b) { return a += b; }
constexpr vec3 operator-(vec3 a, const vec3& b) { return a -= b; }
constexpr vec3 operator*(double s, vec3 a) { return a *= s; }
constexpr vec3 operator*(vec3 a, double s) { return a *= s; }
constexpr vec3 operator-(const vec3& a) { return {-a[0], -a[1], -a[2]}; }

constexpr double dot(const vec3& a, const vec3& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

constexpr vec3 cross(const vec3& a, const vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2],
          a[0] * b[1] - a[1] * b[0]};
}

inline double norm(const vec3& a) { return std::sqrt(dot(a, a)); }

inline double norm_inf(const vec3& a) {
  return std::max({std::abs(a[0]), std::abs(a[1]), std::abs(a[2])});
}

// 3x3 matrix, row-major.
struct mat3 {
  std::array<double, 9> m{};

  static constexpr mat3 identity() {
    mat3 r;
    r.m = {1, 0, 0, 0, 1, 0, 0, 0, 1};
    return r;
  }

  constexpr double operator()(std::size_t i, std::size_t j) const {
    return m[3 * i + j];
  }
  constexpr double& operator()(std::size_t i, std::size_t j) {
    return m[3 * i + j];
  }

  constexpr mat3& operator+=(const mat3& o) {
    for (std::size_t i = 0; i < 9; ++i) m[i] += o.m[i];
    return *this;
  }
  constexpr mat3& operator-=(const mat3& o) {
    for (std::size_t i = 0; i < 9; ++i) m[i] -= o.m[i];
    return *this;
  }
  constexpr mat3& operator*=(double s) {
    for (std::size_t i = 0; i < 9; ++i) m[i] *= s;
    return *this;
  }
  friend constexpr bool operator==(const mat3&, const mat3&) = default;
};

constexpr mat3 operator+(mat3 a, const mat3& b) { return a += b; }
constexpr mat3 operator-(mat3 a, const mat3& b) { return a -= b; }
constexpr mat3 operator*(double s, mat3 a) { return a *= s; }

constexpr mat3 operator*(const mat3& a, const mat3& b) {
  mat3 r;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      r(i, j) = a(i, 0) * b(0, j) + a(i, 1) * b(1, j) + a(i, 2) * b(2, j);
  return r;
}

// Row vector times matrix: (v M)_j = sum_i v_i M_ij.
constexpr vec3 operator*(const vec3& v, const mat3& m) {
  return {v[0] * m(0, 0) + v[1] * m(1, 0) + v[2] * m(2, 0),
          v[0] * m(0, 1) + v[1] * m(1, 1) + v[2] * m(2, 1),
          v[0] * m(0, 2) + v[1] * m(1, 2) + v[2] * m(2, 2)};
}

constexpr double trace(const mat3& m) { return m(0, 0) + m(1, 1) + m(2, 2); }

constexpr double det(const mat3& m) {
  return m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) -
         m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
         m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
}

inline double max_abs(const mat3& m) {
  double r = 0.0;
  for (double x : m.m) r = std::max(r, std::abs(x));
  return r;
}

// Closed-form adjugate inverse; empty when |det| <= det_floor. The matrices
// inverted by the momentum update are 3x3 and near the identity, so no
// pivoting is involved and results are deterministic.
inline std::optional<mat3> try_inverse(const mat3& m, double det_floor) {
  const double d = det(m);
  if (std::abs(d) <= det_floor) return std::nullopt;
  const double inv_d = 1.0 / d;
  mat3 r;
  r(0, 0) = (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) * inv_d;
  r(0, 1) = (m(0, 2) * m(2, 1) - m(0, 1) * m(2, 2)) * inv_d;
  r(0, 2) = (m(0, 1) * m(1, 2) - m(0, 2) * m(1, 1)) * inv_d;
  r(1, 0) = (m(1, 2) * m(2, 0) - m(1, 0) * m(2, 2)) * inv_d;
  r(1, 1) = (m(0, 0) * m(2, 2) - m(0, 2) * m(2, 0)) * inv_d;
  r(1, 2) = (m(0, 2) * m(1, 0) - m(0, 0) * m(1, 2)) * inv_d;
  r(2, 0) = (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0)) * inv_d;
  r(2, 1) = (m(0, 1) * m(2, 0) - m(0, 0) * m(2, 1)) * inv_d;
  r(2, 2) = (m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0)) * inv_d;
  return r;
}

}  // namespace essrk
