#pragma once

#include <array>
#include <charconv>
#include <cstddef>
#include <ostream>
#include <string>

#include "essrk/diagnostics.hpp"
#include "essrk/integrate.hpp"
#include "essrk/system.hpp"

namespace essrk {

// Shortest round-trip decimal form; identical input bits give identical
// text, so CSV output is byte-deterministic.
inline std::string format_double(double v) {
  std::array<char, 32> buf;
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), ptr);
}

// Header: t,q1,q2,q3,p1,p2,p3,E for one particle; per-particle blocks
// q{j}_1..p{j}_3 followed by the total E for more.
inline void write_trajectory_csv(std::ostream& out, const trajectory& traj,
                                 const particle_system& sys) {
  const std::size_t n = sys.size();
  out << "t";
  if (n == 1) {
    out << ",q1,q2,q3,p1,p2,p3";
  } else {
    for (std::size_t j = 1; j <= n; ++j) {
      for (std::size_t d = 1; d <= 3; ++d)
        out << ",q" << j << "_" << d;
      for (std::size_t d = 1; d <= 3; ++d)
        out << ",p" << j << "_" << d;
    }
  }
  out << ",E\n";
  for (const auto& s : traj.states) {
    out << format_double(s.t);
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t d = 0; d < 3; ++d) out << "," << format_double(s.q[j][d]);
      for (std::size_t d = 0; d < 3; ++d) out << "," << format_double(s.p[j][d]);
    }
    out << "," << format_double(energy(s, sys)) << "\n";
  }
}

inline void write_error_series_csv(std::ostream& out,
                                   const diagnostics_report& report) {
  out << "t,amplitude_error,phase_error,E\n";
  for (std::size_t i = 0; i < report.energy_series.size(); ++i) {
    out << format_double(report.energy_series[i].first) << ","
        << format_double(report.amplitude_error_series[i].second) << ","
        << format_double(report.phase_error_series[i].second) << ","
        << format_double(report.energy_series[i].second) << "\n";
  }
}

}  // namespace essrk
