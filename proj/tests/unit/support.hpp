#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "krf/grid.hpp"
#include "krf/profile.hpp"

namespace krf::test {

inline double q_of(double mu) { return mu * (2.0 - mu); }

/// Smooth field sum_k a_k cos(k pi mu / 2) + b_k sin(k pi mu / 2) with seeded coefficients.
inline ScalarField random_smooth_field(const Grid& grid, std::uint64_t seed, int modes = 4) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  std::vector<double> a(modes), b(modes);
  for (int k = 0; k < modes; ++k) {
    a[k] = coef(rng);
    b[k] = coef(rng);
  }
  return ScalarField::sample(grid, [&](double mu) {
    double s = 0.0;
    for (int k = 0; k < modes; ++k) {
      const double x = (k + 1) * std::numbers::pi * mu / 2.0;
      s += a[k] * std::cos(x) + b[k] * std::sin(x);
    }
    return s;
  });
}

/// Composite Simpson of a smooth function on [a, b] with m (even) intervals.
template <class F>
double simpson(F&& f, double a, double b, int m) {
  const double h = (b - a) / m;
  double s = f(a) + f(b);
  for (int i = 1; i < m; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + h * i);
  return s * h / 3.0;
}

inline std::vector<double> values(const ScalarField& f) { return {f.values().begin(), f.values().end()}; }

}  // namespace krf::test
