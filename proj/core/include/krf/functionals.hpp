#pragma once

#include <array>
#include <functional>
#include <string_view>
#include <vector>

#include "krf/grid.hpp"
#include "krf/profile.hpp"

namespace krf {

/// Ricci potential with Laplacian h = R - 2, normalized by int e^h dV = V.
struct RicciPotential {
  ScalarField h;
  double normalization_shift = 0.0;
};

RicciPotential ricci_potential(const MetricProfile& psi);

/// H = int |d h|^2 dV in the Kaehler norm, pi int psi h'^2 dmu, so that the
/// K-energy decreases at rate H along the flow.
double ricci_dissipation(const MetricProfile& psi, const ScalarField& h);

/// One line of the diagnostics series. Entropy-derived entries are NaN on rows
/// where the entropy was not evaluated.
struct DiagnosticsRow {
  double t = 0.0;
  double lambda_hat = 0.0;
  double k_energy = 0.0;
  double H = 0.0;
  double h_sup = 0.0;
  double grad_h_sup = 0.0;
  double lap_h_sup = 0.0;
  double f_sup = 0.0;
  double grad_f_l2 = 0.0;
  double lap_f_l2 = 0.0;
  double f_weighted_mean = 0.0;
  double soliton_resid = 0.0;
  double diam = 0.0;
  double dist_c3_round = 0.0;
  double a_t = 0.0;
  double dt = 0.0;

  static constexpr std::size_t kColumns = 16;
  static const std::array<std::string_view, kColumns>& column_names();
  std::array<double, kColumns> to_array() const;
  static DiagnosticsRow from_array(const std::array<double, kColumns>& v);

  friend bool operator==(const DiagnosticsRow&, const DiagnosticsRow&) = default;
};

/// Fills h_sup, grad_h_sup, lap_h_sup, diam, f_sup, grad_f_l2, lap_f_l2 and
/// f_weighted_mean; the other fields are left at zero.
DiagnosticsRow perelman_diagnostics(const MetricProfile& psi, const ScalarField& h, const ScalarField& f);

/// sigma -> psi_sigma on [0, 1] with its sigma-derivative.
struct ProfilePath {
  std::function<MetricProfile(double)> at;
  std::function<ScalarField(double)> velocity;
};

/// Linear in the symplectic potential: 1/psi_sigma = (1 - sigma)/a + sigma/b.
ProfilePath symplectic_path(const MetricProfile& a, const MetricProfile& b);
/// psi_sigma = (1 - sigma) a + sigma b.
ProfilePath straight_path(const MetricProfile& a, const MetricProfile& b);

/// -int_0^1 int v (K_sigma - 1) dV dsigma with v'' = 2 (d psi / d sigma) / psi^2,
/// composite Simpson over n_sub sub-intervals.
double k_energy_delta(const ProfilePath& path, int n_sub);

/// K-energy relative to the round metric along the symplectic path.
double k_energy(const MetricProfile& psi, int n_sub = 8);

struct PoincareCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  bool pass = false;
};

/// int |grad f|^2 e^h dV  >=  int f^2 e^h dV - (int f e^h dV)^2 / V.
PoincareCheck weighted_poincare_check(const MetricProfile& psi, const ScalarField& h, const ScalarField& f_test);

/// Samples (t, H) of a finished run.
struct DissipationSeries {
  std::vector<double> t;
  std::vector<double> H;
};

struct TailValue {
  double a = 0.0;
  double truncation_bound = 0.0;
};

/// a_t = int_t^inf e^{t - s} H(s) ds by trapezoid over the samples, truncated at
/// the last sample. Throws TailNotResolved unless H(t_end) < 1e-8.
TailValue a_tail(const DissipationSeries& series, double t);

/// a_t at every sample time.
std::vector<double> a_tail_series(const DissipationSeries& series);

/// Oscillation proxy is h_sup: the potential velocity is not tracked in the
/// momentum gauge.
struct SmoothingEntry {
  double t = 0.0;
  double oscillation = 0.0;
  double ratio = 0.0;
};

struct SmoothingTable {
  std::vector<SmoothingEntry> entries;
  double empirical_k = 0.0;
};

/// Ratios (grad_h_sup + lap_h_sup)(t + 2) / h_sup(t) over rows with
/// 1e-10 < h_sup(t) <= delta_probe. Throws WindowUnavailable when some row
/// qualifies but none has a partner two time units later.
SmoothingTable smoothing_ratio(const std::vector<DiagnosticsRow>& rows, double delta_probe = 1.0);

}  // namespace krf
