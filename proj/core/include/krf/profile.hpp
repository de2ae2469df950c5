#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "krf/grid.hpp"

namespace krf {

/// Relative tolerance on the pole slopes psi'(0) = 2, psi'(2) = -2.
inline constexpr double kDefaultTolBc = 1e-3;

/// S^1-invariant Kaehler metric on CP^1, g = dmu^2/psi + psi dtheta^2, stored
/// as its momentum profile psi on [0, 2]. The profile is the representative of
/// the metric modulo diffeomorphisms (up to the reflection mu -> 2 - mu).
///
/// Construction only checks the node count; admissibility is a separate
/// question answered by validate_profile.
class MetricProfile {
 public:
  MetricProfile(Grid grid, std::vector<double> psi);

  const Grid& grid() const noexcept { return grid_; }
  std::span<const double> psi() const noexcept { return psi_; }
  double operator[](std::size_t j) const noexcept { return psi_[j]; }
  double max_value() const;

  /// psi(2 - mu).
  MetricProfile reflected() const;

  friend bool operator==(const MetricProfile&, const MetricProfile&) = default;

 private:
  Grid grid_;
  std::vector<double> psi_;
};

/// psi = mu (2 - mu): the round sphere of area 4 pi, K = 1.
MetricProfile round_profile(const Grid& grid);

/// psi = q (1 + epsilon q^mode), q = mu (2 - mu). Throws InadmissibleProfile
/// when the factor is not positive on the interior.
MetricProfile perturbed_profile(const Grid& grid, double epsilon, int mode);

/// Seeded random admissible profile whose multiplicative factor psi / q stays
/// within [1 - amplitude, 1 + amplitude]. Deterministic for a given seed.
MetricProfile random_profile(const Grid& grid, std::uint64_t seed, double amplitude);

/// Harmonic interpolation 1/psi_s = (1 - s)/psi_a + s/psi_b, i.e. linear
/// interpolation of symplectic potentials, whose second derivative is 1/psi.
MetricProfile symplectic_blend(const MetricProfile& a, const MetricProfile& b, double s);

struct AdmissibilityReport {
  bool endpoints_zero = false;
  bool interior_positive = false;
  bool left_slope_ok = false;
  bool right_slope_ok = false;
  double min_interior = 0.0;
  double left_slope = 0.0;
  double right_slope = 0.0;
  double tol_bc = kDefaultTolBc;

  bool admissible() const noexcept {
    return endpoints_zero && interior_positive && left_slope_ok && right_slope_ok;
  }
  std::string describe() const;
};

AdmissibilityReport validate_profile(const MetricProfile& psi, double tol_bc = kDefaultTolBc);

/// Throws InadmissibleProfile with the failing criteria in the message.
void require_admissible(const MetricProfile& psi, double tol_bc = kDefaultTolBc);

}  // namespace krf
