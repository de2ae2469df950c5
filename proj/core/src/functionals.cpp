#include "krf/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "krf/errors.hpp"
#include "krf/geometry.hpp"
#include "stencil.hpp"

namespace krf {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kNoiseFloor = 1e-10;
constexpr double kTailThreshold = 1e-8;

// Second antiderivative from mu = 1 with zero value and slope there.
std::vector<double> integrate_twice_from_mid(std::span<const double> second, double h, std::size_t mid) {
  const std::size_t n = second.size() - 1;
  std::vector<double> d1(second.size(), 0.0), v(second.size(), 0.0);
  for (std::size_t j = mid; j < n; ++j) {
    d1[j + 1] = d1[j] + 0.5 * h * (second[j] + second[j + 1]);
    v[j + 1] = v[j] + 0.5 * h * (d1[j] + d1[j + 1]);
  }
  for (std::size_t j = mid; j > 0; --j) {
    d1[j - 1] = d1[j] - 0.5 * h * (second[j] + second[j - 1]);
    v[j - 1] = v[j] - 0.5 * h * (d1[j] + d1[j - 1]);
  }
  return v;
}

}  // namespace

// Cell increments h_{j+1} - h_j = dmu (2 - 2 mu - psi') / psi at the cell
// midpoint. With the conservative Laplacian this reproduces Laplacian h = 2 (K - 1)
// exactly at every node, poles included.
RicciPotential ricci_potential(const MetricProfile& psi) {
  require_admissible(psi);
  const auto& grid = psi.grid();
  const double h = grid.spacing();
  const auto p = psi.psi();
  const std::size_t mid = grid.mid();
  std::vector<double> v(grid.size(), 0.0);
  auto increment = [&](std::size_t c) {
    const double mu = h * (static_cast<double>(c) + 0.5);
    const double num = 2.0 - 2.0 * mu - (p[c + 1] - p[c]) / h;
    return h * num / (0.5 * (p[c] + p[c + 1]));
  };
  for (std::size_t c = mid; c < grid.last(); ++c) v[c + 1] = v[c] + increment(c);
  for (std::size_t c = mid; c > 0; --c) v[c - 1] = v[c] - increment(c - 1);

  const auto w = detail::trapezoid_weights(v.size(), h);
  double mass = 0.0;
  for (std::size_t j = 0; j < v.size(); ++j) mass += w[j] * std::exp(v[j]);
  const double shift = std::log(kVolume / (kTwoPi * mass));
  for (double& x : v) x += shift;
  return {ScalarField(grid, std::move(v)), shift};
}

double ricci_dissipation(const MetricProfile& psi, const ScalarField& h) {
  require_same_grid(psi.grid(), h.grid());
  const double dmu = psi.grid().spacing();
  double s = 0.0;
  for (std::size_t c = 0; c + 1 < h.size(); ++c) {
    const double dh = h[c + 1] - h[c];
    s += 0.5 * (psi[c] + psi[c + 1]) * dh * dh;
  }
  return std::numbers::pi * s / dmu;
}

const std::array<std::string_view, DiagnosticsRow::kColumns>& DiagnosticsRow::column_names() {
  static const std::array<std::string_view, kColumns> names = {
      "t",         "lambda_hat", "k_energy",        "H",             "h_sup", "grad_h_sup",
      "lap_h_sup", "f_sup",      "grad_f_l2",       "lap_f_l2",      "f_weighted_mean",
      "soliton_resid", "diam",   "dist_c3_round",   "a_t",           "dt"};
  return names;
}

std::array<double, DiagnosticsRow::kColumns> DiagnosticsRow::to_array() const {
  return {t,         lambda_hat, k_energy,        H,             h_sup, grad_h_sup,
          lap_h_sup, f_sup,      grad_f_l2,       lap_f_l2,      f_weighted_mean,
          soliton_resid, diam,   dist_c3_round,   a_t,           dt};
}

DiagnosticsRow DiagnosticsRow::from_array(const std::array<double, kColumns>& v) {
  DiagnosticsRow r;
  r.t = v[0];
  r.lambda_hat = v[1];
  r.k_energy = v[2];
  r.H = v[3];
  r.h_sup = v[4];
  r.grad_h_sup = v[5];
  r.lap_h_sup = v[6];
  r.f_sup = v[7];
  r.grad_f_l2 = v[8];
  r.lap_f_l2 = v[9];
  r.f_weighted_mean = v[10];
  r.soliton_resid = v[11];
  r.diam = v[12];
  r.dist_c3_round = v[13];
  r.a_t = v[14];
  r.dt = v[15];
  return r;
}

DiagnosticsRow perelman_diagnostics(const MetricProfile& psi, const ScalarField& h, const ScalarField& f) {
  require_same_grid(psi.grid(), h.grid());
  require_same_grid(psi.grid(), f.grid());
  DiagnosticsRow row;
  row.h_sup = h.sup_norm();
  const auto gh = gradient_norm_sq(psi, h);
  for (double x : gh.values()) row.grad_h_sup = std::max(row.grad_h_sup, std::sqrt(x));
  row.lap_h_sup = laplacian(psi, h).sup_norm();
  row.diam = diameter(psi);

  row.f_sup = f.sup_norm();
  row.grad_f_l2 = std::sqrt(integrate(gradient_norm_sq(psi, f)));
  const auto lf = laplacian(psi, f);
  row.lap_f_l2 = std::sqrt(integrate(lf, lf));
  std::vector<double> fe(f.size());
  for (std::size_t j = 0; j < fe.size(); ++j) fe[j] = f[j] * std::exp(-f[j]);
  row.f_weighted_mean = integrate(ScalarField(f.grid(), std::move(fe)));
  return row;
}

ProfilePath symplectic_path(const MetricProfile& a, const MetricProfile& b) {
  require_same_grid(a.grid(), b.grid());
  ProfilePath path;
  path.at = [a, b](double s) { return symplectic_blend(a, b, s); };
  // d psi / d sigma = -psi^2 (1/b - 1/a), zero at the poles.
  path.velocity = [a, b](double s) {
    const auto p = symplectic_blend(a, b, s);
    const std::size_t n = p.grid().last();
    std::vector<double> v(p.grid().size(), 0.0);
    for (std::size_t j = 1; j < n; ++j) v[j] = -p[j] * p[j] * (1.0 / b[j] - 1.0 / a[j]);
    return ScalarField(p.grid(), std::move(v));
  };
  return path;
}

ProfilePath straight_path(const MetricProfile& a, const MetricProfile& b) {
  require_same_grid(a.grid(), b.grid());
  ProfilePath path;
  path.at = [a, b](double s) {
    std::vector<double> v(a.grid().size());
    for (std::size_t j = 0; j < v.size(); ++j) v[j] = (1.0 - s) * a[j] + s * b[j];
    return MetricProfile(a.grid(), std::move(v));
  };
  path.velocity = [a, b](double) {
    std::vector<double> v(a.grid().size());
    for (std::size_t j = 0; j < v.size(); ++j) v[j] = b[j] - a[j];
    return ScalarField(a.grid(), std::move(v));
  };
  return path;
}

// Along the path the potential velocity v satisfies delta psi = (psi^2 / 2) v''.
// v is fixed up to an affine function, which pairs to zero with K - 1 because
// int (K - 1) dV = int (K - 1) mu dV = 0 for every admissible profile.
double k_energy_delta(const ProfilePath& path, int n_sub) {
  if (n_sub < 1) throw ValidationError("n_sub", "must be at least 1");
  auto integrand = [&](double s) {
    const auto p = path.at(s);
    require_admissible(p);
    const auto vel = path.velocity(s);
    const auto& grid = p.grid();
    const double h = grid.spacing();
    const std::size_t n = grid.last();
    std::vector<double> second(grid.size());
    for (std::size_t j = 1; j < n; ++j) second[j] = 2.0 * vel[j] / (p[j] * p[j]);
    second[0] = 2.0 * second[1] - second[2];
    second[n] = 2.0 * second[n - 1] - second[n - 2];
    const auto v = integrate_twice_from_mid(second, h, grid.mid());
    const auto k = detail::gauss_curvature(p.psi(), h);
    const auto w = detail::trapezoid_weights(v.size(), h);
    double s_int = 0.0;
    for (std::size_t j = 0; j < v.size(); ++j) s_int += w[j] * v[j] * (k[j] - 1.0);
    return -kTwoPi * s_int;
  };
  const int m = 2 * n_sub;
  const double ds = 1.0 / m;
  double sum = integrand(0.0) + integrand(1.0);
  for (int i = 1; i < m; ++i) sum += (i % 2 == 1 ? 4.0 : 2.0) * integrand(ds * i);
  return sum * ds / 3.0;
}

double k_energy(const MetricProfile& psi, int n_sub) {
  return k_energy_delta(symplectic_path(round_profile(psi.grid()), psi), n_sub);
}

PoincareCheck weighted_poincare_check(const MetricProfile& psi, const ScalarField& h, const ScalarField& f_test) {
  require_same_grid(psi.grid(), h.grid());
  require_same_grid(psi.grid(), f_test.grid());
  const auto& grid = psi.grid();
  std::vector<double> eh(grid.size()), f2(grid.size());
  for (std::size_t j = 0; j < eh.size(); ++j) {
    eh[j] = std::exp(h[j]);
    f2[j] = f_test[j] * f_test[j];
  }
  const ScalarField weight(grid, std::move(eh));
  PoincareCheck out;
  out.lhs = integrate(gradient_norm_sq(psi, f_test), weight);
  const double mean = integrate(f_test, weight);
  const double second = integrate(ScalarField(grid, std::move(f2)), weight);
  out.rhs = second - mean * mean / kVolume;
  const double scale = std::max({1.0, std::abs(out.lhs), std::abs(second)});
  out.pass = out.lhs >= out.rhs - 1e-10 * scale;
  return out;
}

std::vector<double> a_tail_series(const DissipationSeries& series) {
  const auto& t = series.t;
  const auto& H = series.H;
  if (t.empty() || t.size() != H.size()) throw ValidationError("series", "t and H must be non-empty and aligned");
  if (!(H.back() < kTailThreshold)) {
    throw Error(ErrorKind::TailNotResolved, "H(t_end) = " + std::to_string(H.back()) + " is not below 1e-8");
  }
  std::vector<double> a(t.size(), 0.0);
  for (std::size_t i = t.size() - 1; i-- > 0;) {
    const double dt = t[i + 1] - t[i];
    const double decay = std::exp(-dt);
    a[i] = decay * a[i + 1] + 0.5 * dt * (H[i] + decay * H[i + 1]);
  }
  return a;
}

TailValue a_tail(const DissipationSeries& series, double t) {
  const auto a = a_tail_series(series);
  const auto& ts = series.t;
  const double t_end = ts.back();
  if (t >= t_end) return {0.0, series.H.back()};
  auto it = std::lower_bound(ts.begin(), ts.end(), t);
  const auto i = static_cast<std::size_t>(it - ts.begin());
  double value = a[i];
  if (ts[i] > t) {
    // Partial interval [t, t_i] with H interpolated linearly.
    const double dt = ts[i] - t;
    const double w = i > 0 ? (t - ts[i - 1]) / (ts[i] - ts[i - 1]) : 1.0;
    const double h_t = i > 0 ? (1.0 - w) * series.H[i - 1] + w * series.H[i] : series.H[i];
    const double decay = std::exp(-dt);
    value = decay * a[i] + 0.5 * dt * (h_t + decay * series.H[i]);
  }
  return {value, std::exp(t - t_end) * series.H.back()};
}

SmoothingTable smoothing_ratio(const std::vector<DiagnosticsRow>& rows, double delta_probe) {
  SmoothingTable table;
  bool candidate = false;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const double osc = rows[i].h_sup;
    if (!(osc > kNoiseFloor && osc <= delta_probe)) continue;
    candidate = true;
    const double target = rows[i].t + 2.0;
    const double tol = i + 1 < rows.size() ? 0.5 * (rows[i + 1].t - rows[i].t) : 1e-9;
    auto it = std::lower_bound(rows.begin(), rows.end(), target - tol,
                               [](const DiagnosticsRow& r, double v) { return r.t < v; });
    if (it == rows.end() || std::abs(it->t - target) > tol) continue;
    const double ratio = (it->grad_h_sup + it->lap_h_sup) / osc;
    table.entries.push_back({rows[i].t, osc, ratio});
    table.empirical_k = std::max(table.empirical_k, ratio);
  }
  if (candidate && table.entries.empty()) {
    throw Error(ErrorKind::WindowUnavailable, "no recorded row lies two time units after a qualifying row");
  }
  return table;
}

}  // namespace krf
