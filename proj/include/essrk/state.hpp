#pragma once

#include <cstddef>
#include <vector>

#include "essrk/linalg.hpp"

namespace essrk {

// Concatenated positions and momenta of N particles plus the current time;
// the object every map transforms.
struct phase_state {
  std::vector<vec3> q;
  std::vector<vec3> p;
  double t = 0.0;

  std::size_t size() const { return q.size(); }
};

inline double state_norm_inf(const phase_state& s) {
  double r = 0.0;
  for (const auto& v : s.q) r = std::max(r, norm_inf(v));
  for (const auto& v : s.p) r = std::max(r, norm_inf(v));
  return r;
}

// Canonical flattening (all q coordinates, then all p coordinates), the
// ordering assumed by the symplectic structure matrix J.
inline std::vector<double> flatten(const phase_state& s) {
  const std::size_t n = s.size();
  std::vector<double> z(6 * n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t d = 0; d < 3; ++d) {
      z[3 * j + d] = s.q[j][d];
      z[3 * n + 3 * j + d] = s.p[j][d];
    }
  return z;
}

inline phase_state unflatten(const std::vector<double>& z, double t) {
  const std::size_t n = z.size() / 6;
  phase_state s;
  s.q.resize(n);
  s.p.resize(n);
  s.t = t;
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t d = 0; d < 3; ++d) {
      s.q[j][d] = z[3 * j + d];
      s.p[j][d] = z[3 * n + 3 * j + d];
    }
  return s;
}

}  // namespace essrk
