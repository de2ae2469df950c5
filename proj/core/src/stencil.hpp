#pragma once

// Finite-difference stencils on the uniform momentum grid. Interior nodes use
// centered differences; end nodes use one-sided second-order stencils.

#include <cstddef>
#include <span>
#include <vector>

namespace krf::detail {

inline double d1(std::span<const double> v, std::size_t j, double h) {
  const std::size_t n = v.size() - 1;
  if (j == 0) return (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * h);
  if (j == n) return (3.0 * v[n] - 4.0 * v[n - 1] + v[n - 2]) / (2.0 * h);
  return (v[j + 1] - v[j - 1]) / (2.0 * h);
}

inline double d2(std::span<const double> v, std::size_t j, double h) {
  const std::size_t n = v.size() - 1;
  if (j == 0) return (2.0 * v[0] - 5.0 * v[1] + 4.0 * v[2] - v[3]) / (h * h);
  if (j == n) return (2.0 * v[n] - 5.0 * v[n - 1] + 4.0 * v[n - 2] - v[n - 3]) / (h * h);
  return (v[j + 1] - 2.0 * v[j] + v[j - 1]) / (h * h);
}

inline std::vector<double> derivative(std::span<const double> v, double h) {
  std::vector<double> out(v.size());
  for (std::size_t j = 0; j < v.size(); ++j) out[j] = d1(v, j, h);
  return out;
}

/// Composite trapezoid weights on [0, 2].
inline std::vector<double> trapezoid_weights(std::size_t n_nodes, double h) {
  std::vector<double> w(n_nodes, h);
  w.front() = 0.5 * h;
  w.back() = 0.5 * h;
  return w;
}

/// psi at cell midpoints, psi_{j+1/2} = (psi_j + psi_{j+1}) / 2.
inline std::vector<double> midpoint_values(std::span<const double> psi) {
  std::vector<double> out(psi.size() - 1);
  for (std::size_t c = 0; c + 1 < psi.size(); ++c) out[c] = 0.5 * (psi[c] + psi[c + 1]);
  return out;
}

/// Pole slope |psi'| = 2 of every admissible profile (cone angle 2 pi).
inline constexpr double kPoleSlope = 2.0;

/// Gaussian curvature K = -psi''/2. Interior nodes are centered differences;
/// each pole node carries the average of K over its half cell, obtained from
/// Gauss-Bonnet on the polar cap with the pole slope pinned to +-2.
inline std::vector<double> gauss_curvature(std::span<const double> psi, double h) {
  const std::size_t n = psi.size() - 1;
  std::vector<double> k(psi.size());
  for (std::size_t j = 1; j < n; ++j) k[j] = -0.5 * (psi[j + 1] - 2.0 * psi[j] + psi[j - 1]) / (h * h);
  k[0] = (kPoleSlope * h - (psi[1] - psi[0])) / (h * h);
  k[n] = (kPoleSlope * h - (psi[n - 1] - psi[n])) / (h * h);
  return k;
}

/// Conservative (psi f')' with half-cell flux balance at the poles, where the
/// flux vanishes with psi.
inline std::vector<double> weighted_laplacian(std::span<const double> psi, std::span<const double> f,
                                              double h) {
  const std::size_t n = psi.size() - 1;
  std::vector<double> out(psi.size());
  const double h2 = h * h;
  for (std::size_t j = 1; j < n; ++j) {
    const double right = 0.5 * (psi[j] + psi[j + 1]) * (f[j + 1] - f[j]);
    const double left = 0.5 * (psi[j - 1] + psi[j]) * (f[j] - f[j - 1]);
    out[j] = (right - left) / h2;
  }
  out[0] = 2.0 * 0.5 * (psi[0] + psi[1]) * (f[1] - f[0]) / h2;
  out[n] = -2.0 * 0.5 * (psi[n - 1] + psi[n]) * (f[n] - f[n - 1]) / h2;
  return out;
}

}  // namespace krf::detail
