#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "boltz/velocity.hpp"

namespace boltz::testing {

inline std::vector<double> maxwellian_points(const VelocityGrid& g, double rho, double u1, double u2, double T) {
  std::vector<double> out(static_cast<std::size_t>(g.slice_size()));
  maxwellian_slice(g, rho, u1, u2, T, out);
  return out;
}

/// Drifting Maxwellian M(1, (0.3, -0.2), 0.6).
inline std::vector<double> drifting_maxwellian(const VelocityGrid& g) { return maxwellian_points(g, 1.0, 0.3, -0.2, 0.6); }

/// Equal-weight sum of two displaced Maxwellians.
inline std::vector<double> bi_maxwellian(const VelocityGrid& g) {
  auto a = maxwellian_points(g, 0.5, 0.6, -0.2, 0.8);
  auto b = maxwellian_points(g, 0.5, -0.6, 0.3, 0.8);
  for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
  return a;
}

/// M(1, 0, 0.7) times a quadratic perturbation.
inline std::vector<double> perturbed_maxwellian(const VelocityGrid& g) {
  auto m = maxwellian_points(g, 1.0, 0.0, 0.0, 0.7);
  const int n = g.n_points();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double vx = g.point(i), vy = g.point(j);
      m[static_cast<std::size_t>(i * n + j)] *= 1.0 + 0.2 * vx * vy + 0.1 * (vx * vx - vy * vy);
    }
  return m;
}

inline double l2(std::span<const double> a) {
  double s = 0.0;
  for (double x : a) s += x * x;
  return std::sqrt(s);
}

inline double l2_diff(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

inline double sup(std::span<const double> a) {
  double s = 0.0;
  for (double x : a) s = std::max(s, std::abs(x));
  return s;
}

}  // namespace boltz::testing
