#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

#include "essrk/butcher.hpp"
#include "essrk/splitting.hpp"
#include "essrk/state.hpp"
#include "essrk/system.hpp"

namespace essrk {

// Triple-jump coefficient gamma_p = 1 / (2 - 2^(1/(p+1))). Always > 1, so
// the middle sub-interval of the order-raising step runs backward.
inline double gamma_for(int p) {
  if (p < 2 || p % 2 != 0)
    throw std::invalid_argument("gamma_for: order must be a positive even integer");
  return 1.0 / (2.0 - std::pow(2.0, 1.0 / (p + 1)));
}

enum class segment_kind { drift, kick };

// One substep of a composition, as a fraction of the macro step h. Drift
// fractions live on the kinetic chain (durations sum to 1); kick fractions
// tile the field time [t, t+h]. Fractions may leave [0,1].
struct schedule_segment {
  segment_kind kind;
  double start_fraction;
  double end_fraction;

  double length() const { return end_fraction - start_fraction; }
};

// The drift/kick alternation realizing the order-p composition:
//
//   Theta_2(t+h, t)   = psi_1(h/2) o psi_2(t+h, t) o psi_1(h/2)
//   Theta_{p+2}(t+h,t) = Theta_p over [1-g, 1] o Theta_p over [g, 1-g]
//                        o Theta_p over [0, g],   g = gamma_for(p),
//
// with adjacent drifts merged (psi_1 forms a semigroup). The merged
// segment count obeys T_2 = 3, T_{p+2} = 3 T_p - 2, and the kick count is
// 3^((p-2)/2). Schedules depend only on p, so build once and reuse.
class composition_schedule {
 public:
  static composition_schedule build(int p) {
    if (p < 2 || p % 2 != 0)
      throw std::invalid_argument(
          "composition_schedule: order must be a positive even integer");
    std::vector<schedule_segment> segs{{segment_kind::drift, 0.0, 0.5},
                                       {segment_kind::kick, 0.0, 1.0},
                                       {segment_kind::drift, 0.5, 1.0}};
    for (int order = 2; order < p; order += 2) {
      const double g = gamma_for(order);
      const std::array<std::pair<double, double>, 3> windows{
          {{0.0, g}, {g, 1.0 - g}, {1.0 - g, 1.0}}};
      std::vector<schedule_segment> next;
      next.reserve(3 * segs.size() - 2);
      for (const auto& [a, b] : windows) {
        const double span = b - a;
        for (const auto& seg : segs) {
          schedule_segment mapped{seg.kind, a + seg.start_fraction * span,
                                  a + seg.end_fraction * span};
          if (!next.empty() && next.back().kind == segment_kind::drift &&
              mapped.kind == segment_kind::drift)
            next.back().end_fraction = mapped.end_fraction;
          else
            next.push_back(mapped);
        }
      }
      segs = std::move(next);
    }
    return composition_schedule(p, std::move(segs));
  }

  int order() const { return order_; }
  const std::vector<schedule_segment>& segments() const { return segments_; }

  std::size_t kick_count() const {
    std::size_t n = 0;
    for (const auto& s : segments_)
      if (s.kind == segment_kind::kick) ++n;
    return n;
  }

 private:
  composition_schedule(int order, std::vector<schedule_segment> segments)
      : order_(order), segments_(std::move(segments)) {}

  int order_;
  std::vector<schedule_segment> segments_;
};

// One ESSRK step of size h: drifts by fraction * h on the kinetic chain,
// kicks over [t + start * h, t + end * h] on the field-time chain. Both
// chains end at t + h. Symplectic for every h as a composition of
// symplectic maps, and O(h^{p+1}) accurate when the tableau order is at
// least the schedule order.
inline void essrk_step(phase_state& s, const composition_schedule& schedule,
                       const butcher_tableau& tab, double h,
                       const particle_system& sys) {
  if (schedule.order() > tab.order())
    throw std::invalid_argument("essrk_step: schedule order " +
                                std::to_string(schedule.order()) +
                                " exceeds tableau order " +
                                std::to_string(tab.order()));
  const double t0 = s.t;
  for (const auto& seg : schedule.segments()) {
    if (seg.kind == segment_kind::drift) {
      const double d = seg.length() * h;
      for (std::size_t j = 0; j < s.size(); ++j)
        s.q[j] += (d / sys.props(j).mass) * s.p[j];
    } else {
      kick_over(s, t0 + seg.start_fraction * h, seg.length() * h, tab, sys);
    }
  }
  s.t = t0 + h;
}

}  // namespace essrk
