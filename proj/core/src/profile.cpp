#include "krf/profile.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "krf/errors.hpp"
#include "stencil.hpp"

namespace krf {

namespace {

double round_q(double mu) { return mu * (2.0 - mu); }

// Uniform on [-1, 1) from the raw engine output, so the stream is fixed by the
// standard's definition of mt19937_64 alone.
double symmetric_unit(std::mt19937_64& rng) {
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return 2.0 * u - 1.0;
}

}  // namespace

MetricProfile::MetricProfile(Grid grid, std::vector<double> psi) : grid_(grid), psi_(std::move(psi)) {
  if (psi_.size() != grid_.size()) {
    throw Error(ErrorKind::GridMismatch, "profile has " + std::to_string(psi_.size()) + " values for " +
                                             std::to_string(grid_.size()) + " nodes");
  }
}

double MetricProfile::max_value() const { return *std::max_element(psi_.begin(), psi_.end()); }

MetricProfile MetricProfile::reflected() const {
  std::vector<double> r(psi_.rbegin(), psi_.rend());
  return MetricProfile(grid_, std::move(r));
}

MetricProfile round_profile(const Grid& grid) {
  std::vector<double> psi(grid.size());
  for (std::size_t j = 0; j < psi.size(); ++j) psi[j] = round_q(grid.node(j));
  return MetricProfile(grid, std::move(psi));
}

MetricProfile perturbed_profile(const Grid& grid, double epsilon, int mode) {
  if (mode < 1) throw ValidationError("mode", "perturbation mode must be >= 1");
  std::vector<double> psi(grid.size());
  for (std::size_t j = 0; j < psi.size(); ++j) {
    const double q = round_q(grid.node(j));
    psi[j] = q * (1.0 + epsilon * std::pow(q, mode));
  }
  MetricProfile out(grid, std::move(psi));
  require_admissible(out);
  return out;
}

MetricProfile random_profile(const Grid& grid, std::uint64_t seed, double amplitude) {
  if (!(amplitude >= 0.0 && amplitude < 1.0)) {
    throw ValidationError("amplitude", "must lie in [0, 1)");
  }
  constexpr int kModes = 3;
  constexpr int kAttempts = 16;
  std::mt19937_64 rng(seed);
  const auto mu = grid.nodes();

  for (int attempt = 0; attempt < kAttempts; ++attempt) {
    double a[kModes];
    double b[kModes];
    for (int k = 0; k < kModes; ++k) {
      a[k] = symmetric_unit(rng);
      b[k] = symmetric_unit(rng);
    }
    std::vector<double> shape(mu.size());
    double peak = 0.0;
    for (std::size_t j = 0; j < mu.size(); ++j) {
      const double q = round_q(mu[j]);
      double m = 0.0;
      double qk = q;
      for (int k = 0; k < kModes; ++k) {
        const double phase = (k + 1) * std::numbers::pi * (mu[j] - 1.0) / 2.0;
        m += qk * (a[k] * std::cos(phase) + b[k] * std::sin(phase));
        qk *= q;
      }
      shape[j] = m;
      peak = std::max(peak, std::abs(m));
    }
    if (peak < 1e-8) continue;

    std::vector<double> psi(mu.size());
    for (std::size_t j = 0; j < mu.size(); ++j) {
      psi[j] = round_q(mu[j]) * (1.0 + amplitude * (shape[j] / peak));
    }
    MetricProfile out(grid, std::move(psi));
    if (validate_profile(out).admissible()) return out;
  }
  throw Error(ErrorKind::InadmissibleProfile,
              "random_profile: no admissible draw for seed " + std::to_string(seed));
}

MetricProfile symplectic_blend(const MetricProfile& a, const MetricProfile& b, double s) {
  require_same_grid(a.grid(), b.grid());
  if (s == 0.0) return a;
  if (s == 1.0) return b;
  std::vector<double> psi(a.grid().size(), 0.0);
  for (std::size_t j = 1; j + 1 < psi.size(); ++j) {
    psi[j] = 1.0 / ((1.0 - s) / a[j] + s / b[j]);
  }
  return MetricProfile(a.grid(), std::move(psi));
}

std::string AdmissibilityReport::describe() const {
  std::ostringstream os;
  os << "endpoints_zero=" << endpoints_zero << " interior_positive=" << interior_positive
     << " (min " << min_interior << ") left_slope=" << left_slope << (left_slope_ok ? " ok" : " FAIL")
     << " right_slope=" << right_slope << (right_slope_ok ? " ok" : " FAIL") << " tol_bc=" << tol_bc;
  return os.str();
}

AdmissibilityReport validate_profile(const MetricProfile& profile, double tol_bc) {
  const auto psi = profile.psi();
  const std::size_t n = psi.size() - 1;
  const double h = profile.grid().spacing();

  AdmissibilityReport r;
  r.tol_bc = tol_bc;
  r.endpoints_zero = psi[0] == 0.0 && psi[n] == 0.0;
  r.min_interior = *std::min_element(psi.begin() + 1, psi.end() - 1);
  r.interior_positive = r.min_interior > 0.0 && std::all_of(psi.begin(), psi.end(), [](double v) {
                          return std::isfinite(v);
                        });
  r.left_slope = detail::d1(psi, 0, h);
  r.right_slope = detail::d1(psi, n, h);
  r.left_slope_ok = std::abs(r.left_slope / detail::kPoleSlope - 1.0) <= tol_bc;
  r.right_slope_ok = std::abs(-r.right_slope / detail::kPoleSlope - 1.0) <= tol_bc;
  return r;
}

void require_admissible(const MetricProfile& psi, double tol_bc) {
  const auto report = validate_profile(psi, tol_bc);
  if (!report.admissible()) {
    throw Error(ErrorKind::InadmissibleProfile, "inadmissible profile: " + report.describe());
  }
}

}  // namespace krf
