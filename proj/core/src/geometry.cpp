#include "krf/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "krf/errors.hpp"
#include "stencil.hpp"

namespace krf {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double trapezoid(std::span<const double> v, double h) {
  double s = 0.5 * (v.front() + v.back());
  for (std::size_t j = 1; j + 1 < v.size(); ++j) s += v[j];
  return s * h;
}

// psi / (mu (2 - mu)); the pole values are the slope ratios psi'(0)/2, -psi'(2)/2.
std::vector<double> round_ratio(const MetricProfile& profile) {
  const auto psi = profile.psi();
  const auto& grid = profile.grid();
  const double h = grid.spacing();
  const std::size_t n = grid.last();
  std::vector<double> r(psi.size());
  for (std::size_t j = 1; j < n; ++j) {
    const double mu = grid.node(j);
    r[j] = psi[j] / (mu * (2.0 - mu));
  }
  r[0] = detail::d1(psi, 0, h) / detail::kPoleSlope;
  r[n] = -detail::d1(psi, n, h) / detail::kPoleSlope;
  return r;
}

// Cubic Lagrange interpolation of nodal values at mu.
double interpolate_cubic(std::span<const double> v, double h, double mu) {
  const std::size_t n = v.size() - 1;
  const double x = mu / h;
  auto i = static_cast<std::ptrdiff_t>(std::floor(x));
  i = std::clamp<std::ptrdiff_t>(i, 1, static_cast<std::ptrdiff_t>(n) - 2);
  const std::ptrdiff_t base = i - 1;
  double out = 0.0;
  for (int a = 0; a < 4; ++a) {
    double l = 1.0;
    for (int b = 0; b < 4; ++b) {
      if (a != b) l *= (x - static_cast<double>(base + b)) / static_cast<double>(a - b);
    }
    out += l * v[static_cast<std::size_t>(base + a)];
  }
  return out;
}

double sup_abs_diff(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

Curvature curvature(const MetricProfile& psi) {
  const auto& grid = psi.grid();
  auto k = detail::gauss_curvature(psi.psi(), grid.spacing());
  std::vector<double> r(k.size());
  std::transform(k.begin(), k.end(), r.begin(), [](double x) { return 2.0 * x; });
  return {ScalarField(grid, std::move(k)), ScalarField(grid, std::move(r))};
}

double curvature_residual(const MetricProfile& psi) {
  const auto k = detail::gauss_curvature(psi.psi(), psi.grid().spacing());
  double m = 0.0;
  for (double x : k) m = std::max(m, std::abs(x - 1.0));
  return m;
}

ScalarField laplacian(const MetricProfile& psi, const ScalarField& f) {
  require_same_grid(psi.grid(), f.grid());
  return ScalarField(psi.grid(), detail::weighted_laplacian(psi.psi(), f.values(), psi.grid().spacing()));
}

ScalarField gradient_norm_sq(const MetricProfile& psi, const ScalarField& f) {
  require_same_grid(psi.grid(), f.grid());
  const double h = psi.grid().spacing();
  std::vector<double> out(f.size());
  for (std::size_t j = 0; j < out.size(); ++j) {
    const double df = detail::d1(f.values(), j, h);
    out[j] = psi[j] * df * df;
  }
  return ScalarField(psi.grid(), std::move(out));
}

double integrate(const ScalarField& field) {
  return kTwoPi * trapezoid(field.values(), field.grid().spacing());
}

double integrate(const ScalarField& field, const ScalarField& weight) {
  require_same_grid(field.grid(), weight.grid());
  std::vector<double> prod(field.size());
  for (std::size_t j = 0; j < prod.size(); ++j) prod[j] = field[j] * weight[j];
  return kTwoPi * trapezoid(prod, field.grid().spacing());
}

// With mu = 1 - cos(s) the round profile becomes sin^2(s), so
//   diam = int_0^pi ds / sqrt(r(mu(s))),  r = psi / (mu (2 - mu)),
// and r is smooth and positive up to the poles. The s-integrand is even and
// periodic, so the trapezoid rule in s converges spectrally; the accuracy is set
// by the cubic interpolation of r.
double diameter(const MetricProfile& psi) {
  require_admissible(psi);
  const auto r = round_ratio(psi);
  const double h = psi.grid().spacing();
  const std::size_t m = 4 * psi.grid().size();
  const double ds = std::numbers::pi / static_cast<double>(m);
  double sum = 0.0;
  for (std::size_t k = 0; k <= m; ++k) {
    const double s = ds * static_cast<double>(k);
    double ratio;
    if (k == 0) {
      ratio = r.front();
    } else if (k == m) {
      ratio = r.back();
    } else {
      ratio = interpolate_cubic(r, h, 1.0 - std::cos(s));
    }
    if (!(ratio > 0.0)) throw Error(ErrorKind::InadmissibleProfile, "diameter: psi not positive");
    const double weight = (k == 0 || k == m) ? 0.5 : 1.0;
    sum += weight / std::sqrt(ratio);
  }
  return sum * ds;
}

SolitonResidual hessian_and_soliton_residual(const MetricProfile& psi, const ScalarField& f) {
  require_same_grid(psi.grid(), f.grid());
  const auto& grid = psi.grid();
  const double h = grid.spacing();
  const auto k = detail::gauss_curvature(psi.psi(), h);
  const auto fv = f.values();
  std::vector<double> a(grid.size());
  std::vector<double> b(grid.size());
  std::vector<double> density(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const double dpsi = detail::d1(psi.psi(), j, h);
    const double df = detail::d1(fv, j, h);
    const double ddf = detail::d2(fv, j, h);
    b[j] = (k[j] - 1.0) + 0.5 * dpsi * df;
    a[j] = b[j] + psi[j] * ddf;
    density[j] = (a[j] * a[j] + b[j] * b[j]) * std::exp(-fv[j]);
  }
  const double norm_sq = kTwoPi * trapezoid(density, h);
  return {ScalarField(grid, std::move(a)), ScalarField(grid, std::move(b)), std::sqrt(norm_sq)};
}

double SolitonResidual::coordinate_mumu(const MetricProfile& psi, std::size_t j) const {
  return s_mumu[j] / psi[j];
}

double SolitonResidual::coordinate_thth(const MetricProfile& psi, std::size_t j) const {
  return s_thth[j] * psi[j];
}

// u = u_round + w with u_round = [mu log mu + (2-mu) log(2-mu)] / 2 carrying the
// logarithmic pole behaviour exactly. w'' = (1/r - 1)/q is bounded, so w is
// integrated twice by trapezoid outward from mu = 1.
ScalarField symplectic_potential(const MetricProfile& psi) {
  require_admissible(psi);
  const auto& grid = psi.grid();
  const double h = grid.spacing();
  const std::size_t n = grid.last();
  const std::size_t mid = grid.mid();
  const auto r = round_ratio(psi);

  std::vector<double> w2(grid.size());
  for (std::size_t j = 1; j < n; ++j) {
    const double mu = grid.node(j);
    w2[j] = (1.0 / r[j] - 1.0) / (mu * (2.0 - mu));
  }
  w2[0] = 2.0 * w2[1] - w2[2];
  w2[n] = 2.0 * w2[n - 1] - w2[n - 2];

  std::vector<double> w1(grid.size(), 0.0);
  std::vector<double> w(grid.size(), 0.0);
  for (std::size_t j = mid; j < n; ++j) {
    w1[j + 1] = w1[j] + 0.5 * h * (w2[j] + w2[j + 1]);
    w[j + 1] = w[j] + 0.5 * h * (w1[j] + w1[j + 1]);
  }
  for (std::size_t j = mid; j > 0; --j) {
    w1[j - 1] = w1[j] - 0.5 * h * (w2[j] + w2[j - 1]);
    w[j - 1] = w[j] - 0.5 * h * (w1[j] + w1[j - 1]);
  }

  auto xlogx = [](double x) { return x > 0.0 ? x * std::log(x) : 0.0; };
  std::vector<double> u(grid.size());
  for (std::size_t j = 0; j <= n; ++j) {
    const double mu = grid.node(j);
    u[j] = 0.5 * (xlogx(mu) + xlogx(2.0 - mu)) + w[j];
  }
  return ScalarField(grid, std::move(u));
}

double c3_distance(const MetricProfile& a, const MetricProfile& b) {
  require_same_grid(a.grid(), b.grid());
  const double h = a.grid().spacing();
  auto branch = [&](const MetricProfile& other) {
    std::vector<double> d(a.grid().size());
    for (std::size_t j = 0; j < d.size(); ++j) d[j] = a[j] - other[j];
    double m = sup_abs_diff(d);
    for (int order = 1; order <= 3; ++order) {
      d = detail::derivative(d, h);
      m = std::max(m, sup_abs_diff(d));
    }
    return m;
  };
  return std::min(branch(b), branch(b.reflected()));
}

}  // namespace krf
