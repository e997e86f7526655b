#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace essrk {

// Coefficients of an explicit Runge-Kutta method: a strictly lower
// triangular s x s matrix a_ij and weights b_i with sum_i b_i = 1. Stage
// abscissae are the row sums c_i = sum_j a_ij; they are computed once at
// construction and never stored by callers. The declared order is trusted
// by the steppers and empirically checkable with the convergence harness.
class butcher_tableau {
 public:
  butcher_tableau(std::string name, int order,
                  std::vector<std::vector<double>> a, std::vector<double> b)
      : name_(std::move(name)), order_(order), b_(std::move(b)) {
    const std::size_t s = b_.size();
    if (s == 0) throw std::invalid_argument("butcher_tableau: no stages");
    if (order_ < 1)
      throw std::invalid_argument("butcher_tableau: order must be positive");
    if (a.size() != s)
      throw std::invalid_argument("butcher_tableau: a must be s x s");
    a_.assign(s * s, 0.0);
    c_.assign(s, 0.0);
    for (std::size_t i = 0; i < s; ++i) {
      if (a[i].size() != s)
        throw std::invalid_argument("butcher_tableau: a must be s x s");
      for (std::size_t j = 0; j < s; ++j) {
        if (j >= i && a[i][j] != 0.0)
          throw std::invalid_argument(
              "butcher_tableau: explicit method requires a_ij = 0 for j >= i");
        a_[i * s + j] = a[i][j];
        c_[i] += a[i][j];
      }
    }
    double bsum = 0.0;
    for (double w : b_) bsum += w;
    if (std::abs(bsum - 1.0) > 1e-12)
      throw std::invalid_argument("butcher_tableau: weights must sum to 1");
  }

  const std::string& name() const { return name_; }
  int order() const { return order_; }
  std::size_t stages() const { return b_.size(); }
  double a(std::size_t i, std::size_t j) const { return a_[i * stages() + j]; }
  double b(std::size_t i) const { return b_[i]; }
  double c(std::size_t i) const { return c_[i]; }

 private:
  std::string name_;
  int order_;
  std::vector<double> a_;  // row-major s x s
  std::vector<double> b_;
  std::vector<double> c_;  // row sums
};

inline const butcher_tableau& euler_tableau() {
  static const butcher_tableau t("euler", 1, {{0.0}}, {1.0});
  return t;
}

inline const butcher_tableau& midpoint_tableau() {
  static const butcher_tableau t("midpoint", 2, {{0.0, 0.0}, {0.5, 0.0}},
                                 {0.0, 1.0});
  return t;
}

// The classical 4th-order method.
inline const butcher_tableau& rk4_tableau() {
  static const butcher_tableau t("rk4", 4,
                                 {{0.0, 0.0, 0.0, 0.0},
                                  {0.5, 0.0, 0.0, 0.0},
                                  {0.0, 0.5, 0.0, 0.0},
                                  {0.0, 0.0, 1.0, 0.0}},
                                 {1.0 / 6.0, 2.0 / 6.0, 2.0 / 6.0, 1.0 / 6.0});
  return t;
}

// Butcher's 7-stage 6th-order method.
inline const butcher_tableau& butcher6_tableau() {
  static const butcher_tableau t(
      "butcher6", 6,
      {{0, 0, 0, 0, 0, 0, 0},
       {1.0 / 3.0, 0, 0, 0, 0, 0, 0},
       {0.0, 2.0 / 3.0, 0, 0, 0, 0, 0},
       {1.0 / 12.0, 1.0 / 3.0, -1.0 / 12.0, 0, 0, 0, 0},
       {-1.0 / 16.0, 9.0 / 8.0, -3.0 / 16.0, -3.0 / 8.0, 0, 0, 0},
       {0.0, 9.0 / 8.0, -3.0 / 8.0, -3.0 / 4.0, 1.0 / 2.0, 0, 0},
       {9.0 / 44.0, -9.0 / 11.0, 63.0 / 44.0, 18.0 / 11.0, 0.0, -16.0 / 11.0,
        0}},
      {11.0 / 120.0, 0.0, 27.0 / 40.0, 27.0 / 40.0, -4.0 / 15.0, -4.0 / 15.0,
       11.0 / 120.0});
  return t;
}

// Smallest shipped tableau whose order is at least p.
inline const butcher_tableau& tableau_for_order(int p) {
  if (p <= 1) return euler_tableau();
  if (p == 2) return midpoint_tableau();
  if (p <= 4) return rk4_tableau();
  if (p <= 6) return butcher6_tableau();
  throw std::invalid_argument("no shipped tableau of order " +
                              std::to_string(p) +
                              "; supply a custom butcher_tableau");
}

}  // namespace essrk
