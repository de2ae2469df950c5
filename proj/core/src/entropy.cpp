#include "krf/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "krf/errors.hpp"
#include "krf/geometry.hpp"
#include "stencil.hpp"

namespace krf {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kArmijo = 1e-4;

// Discrete u-form functional
//   F(u) = 2 pi [ sum_j w_j (R_j u_j^2 / 2 - 2 u_j^2 log u_j) + sum_c 2 psi_c (u_{c+1} - u_c)^2 / h ]
// with constraint 2 pi sum_j w_j u_j^2 = V, so that lambda = kappa F and
// lambda_hat = F / V.
struct Problem {
  explicit Problem(const MetricProfile& profile)
      : psi(profile.psi().begin(), profile.psi().end()),
        h(profile.grid().spacing()),
        w(detail::trapezoid_weights(psi.size(), h)),
        psic(detail::midpoint_values(psi)),
        r(detail::gauss_curvature(psi, h)) {
    for (double& k : r) k *= 2.0;
  }

  std::vector<double> psi;
  double h;
  std::vector<double> w;
  std::vector<double> psic;
  std::vector<double> r;

  std::size_t size() const { return psi.size(); }

  double value(std::span<const double> u) const {
    double bulk = 0.0;
    for (std::size_t j = 0; j < u.size(); ++j) {
      const double u2 = u[j] * u[j];
      bulk += w[j] * (0.5 * r[j] * u2 - 2.0 * u2 * std::log(u[j]));
    }
    double grad = 0.0;
    for (std::size_t c = 0; c < psic.size(); ++c) {
      const double du = u[c + 1] - u[c];
      grad += psic[c] * du * du;
    }
    return kTwoPi * (bulk + 2.0 * grad / h);
  }

  // e = R u - 4 u log u - 2 u - 4 Laplacian u; the gradient of F is 2 pi w e.
  std::vector<double> euler_lagrange(std::span<const double> u) const {
    auto lap = detail::weighted_laplacian(psi, u, h);
    std::vector<double> e(u.size());
    for (std::size_t j = 0; j < u.size(); ++j) {
      e[j] = r[j] * u[j] - 4.0 * u[j] * std::log(u[j]) - 2.0 * u[j] - 4.0 * lap[j];
    }
    return e;
  }

  double mass(std::span<const double> u) const {
    double s = 0.0;
    for (std::size_t j = 0; j < u.size(); ++j) s += w[j] * u[j] * u[j];
    return kTwoPi * s;
  }

  void normalize(std::vector<double>& u) const {
    const double scale = std::sqrt(kVolume / mass(u));
    for (double& x : u) x *= scale;
  }

  // L2(dV) norm of e / (2u) + 1 - lambda_hat, the f-form Euler-Lagrange residual.
  double residual(std::span<const double> u, std::span<const double> e, double lambda_hat) const {
    double s = 0.0;
    for (std::size_t j = 0; j < u.size(); ++j) {
      const double rj = 0.5 * e[j] / u[j] + 1.0 - lambda_hat;
      s += w[j] * rj * rj;
    }
    return std::sqrt(kTwoPi * s);
  }
};

// Tridiagonal system for 2 pi (4 L + sigma W), L the stiffness matrix of the
// flux term, solved by the Thomas algorithm.
class Preconditioner {
 public:
  Preconditioner(const Problem& p, double sigma) : diag_(p.size()), off_(p.size() - 1) {
    for (std::size_t j = 0; j < p.size(); ++j) diag_[j] = sigma * p.w[j];
    for (std::size_t c = 0; c < off_.size(); ++c) {
      const double k = 4.0 * p.psic[c] / p.h;
      diag_[c] += k;
      diag_[c + 1] += k;
      off_[c] = -k;
    }
    for (double& d : diag_) d *= kTwoPi;
    for (double& o : off_) o *= kTwoPi;
    // Forward elimination factors.
    cprime_.resize(off_.size());
    denom_.resize(diag_.size());
    denom_[0] = diag_[0];
    for (std::size_t j = 1; j < diag_.size(); ++j) {
      cprime_[j - 1] = off_[j - 1] / denom_[j - 1];
      denom_[j] = diag_[j] - off_[j - 1] * cprime_[j - 1];
    }
  }

  std::vector<double> solve(std::span<const double> b) const {
    const std::size_t n = diag_.size();
    std::vector<double> x(n);
    x[0] = b[0] / denom_[0];
    for (std::size_t j = 1; j < n; ++j) x[j] = (b[j] - off_[j - 1] * x[j - 1]) / denom_[j];
    for (std::size_t j = n - 1; j-- > 0;) x[j] -= cprime_[j] * x[j + 1];
    return x;
  }

 private:
  std::vector<double> diag_, off_, cprime_, denom_;
};

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) s += a[j] * b[j];
  return s;
}

struct Descent {
  std::vector<double> u;
  double value = 0.0;
  double residual = 0.0;
  int iterations = 0;
};

Descent descend(const Problem& p, const Preconditioner& pre, std::vector<double> u, const EntropyOptions& opts,
                std::vector<double>* history = nullptr) {
  p.normalize(u);
  double value = p.value(u);
  if (history) history->push_back(value / kVolume);
  std::vector<double> trial(u.size());
  for (int it = 0;; ++it) {
    const auto e = p.euler_lagrange(u);
    const double lambda_hat = value / kVolume;
    const double res = p.residual(u, e, lambda_hat);
    if (res < opts.tol * std::max(1.0, lambda_hat)) return {std::move(u), value, res, it};
    if (it >= opts.max_iterations) {
      throw Error(ErrorKind::NoConvergence, "entropy solver: " + std::to_string(it) +
                                                " iterations, residual " + std::to_string(res));
    }

    std::vector<double> g(u.size()), c(u.size());
    for (std::size_t j = 0; j < u.size(); ++j) {
      g[j] = kTwoPi * p.w[j] * e[j];
      c[j] = 2.0 * kTwoPi * p.w[j] * u[j];
    }
    const auto pg = pre.solve(g);
    const auto pc = pre.solve(c);
    const double multiplier = dot(c, pg) / dot(c, pc);
    std::vector<double> d(u.size());
    for (std::size_t j = 0; j < u.size(); ++j) d[j] = -(pg[j] - multiplier * pc[j]);
    const double slope = dot(g, d);

    double alpha = 1.0;
    const double slack = 1e-14 * std::abs(value);
    while (true) {
      bool positive = true;
      for (std::size_t j = 0; j < u.size(); ++j) {
        trial[j] = u[j] + alpha * d[j];
        positive = positive && trial[j] > 0.0;
      }
      if (positive) {
        p.normalize(trial);
        const double v = p.value(trial);
        if (v <= value + kArmijo * alpha * slope + slack) {
          u.swap(trial);
          value = v;
          if (history) history->push_back(value / kVolume);
          break;
        }
      }
      alpha *= 0.5;
      if (alpha < 1e-14) {
        throw Error(ErrorKind::NoConvergence, "entropy solver: line search stalled after " + std::to_string(it) +
                                                  " iterations, residual " + std::to_string(res));
      }
    }
  }
}

std::vector<double> random_start(const Grid& grid, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto uniform = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53 * 2.0 - 1.0; };
  double a[3];
  for (double& x : a) x = uniform();
  std::vector<double> u(grid.size());
  for (std::size_t j = 0; j < u.size(); ++j) {
    const double mu = grid.node(j);
    double m = 0.0;
    for (int k = 0; k < 3; ++k) m += a[k] * std::cos((k + 1) * std::numbers::pi * mu / 2.0);
    u[j] = 1.0 + 0.15 * m;
  }
  return u;
}

}  // namespace

double w_functional(const MetricProfile& psi, const ScalarField& f) {
  require_same_grid(psi.grid(), f.grid());
  const Problem p(psi);
  std::vector<double> u(f.size());
  for (std::size_t j = 0; j < u.size(); ++j) u[j] = std::exp(-0.5 * f[j]);
  const double mass = p.mass(u);
  if (!(std::abs(mass - kVolume) <= 1e-6 * kVolume)) {
    throw Error(ErrorKind::NormalizationViolated,
                "int e^-f dV = " + std::to_string(mass) + ", expected " + std::to_string(kVolume));
  }
  return kKappa * p.value(u);
}

EntropyResult minimize_w(const MetricProfile& psi, const EntropyOptions& opts) {
  require_admissible(psi);
  const Problem p(psi);
  const Preconditioner pre(p, opts.preconditioner_shift);

  std::vector<double> history;
  auto best = descend(p, pre, std::vector<double>(p.size(), 1.0), opts, opts.keep_history ? &history : nullptr);
  int iterations = best.iterations;
  double lo = best.value / kVolume;
  double hi = lo;
  for (int k = 0; k < opts.multistart; ++k) {
    auto run = descend(p, pre, random_start(psi.grid(), opts.seed + static_cast<std::uint64_t>(k)), opts);
    iterations += run.iterations;
    const double lh = run.value / kVolume;
    lo = std::min(lo, lh);
    hi = std::max(hi, lh);
    if (run.value < best.value) best = std::move(run);
  }

  std::vector<double> f(best.u.size());
  for (std::size_t j = 0; j < f.size(); ++j) f[j] = -2.0 * std::log(best.u[j]);
  const double lambda_hat = best.value / kVolume;
  return EntropyResult{ScalarField(psi.grid(), std::move(f)),
                       ScalarField(psi.grid(), std::move(best.u)),
                       kKappa * best.value,
                       lambda_hat,
                       lambda_hat,
                       best.residual,
                       iterations,
                       hi - lo,
                       std::move(history)};
}

double el_residual(const MetricProfile& psi, const ScalarField& f, double lambda_el) {
  require_same_grid(psi.grid(), f.grid());
  const Problem p(psi);
  std::vector<double> u(f.size());
  for (std::size_t j = 0; j < u.size(); ++j) u[j] = std::exp(-0.5 * f[j]);
  return p.residual(u, p.euler_lagrange(u), lambda_el);
}

double dlambda_integrand(const MetricProfile& psi, const ScalarField& f) {
  const auto s = hessian_and_soliton_residual(psi, f);
  return 0.5 * kKappa * s.l2_weighted * s.l2_weighted;
}

Prop44Bound prop44_bound(const MetricProfile& psi, const ScalarField& f, const ScalarField& h) {
  require_same_grid(psi.grid(), h.grid());
  const auto& grid = psi.grid();
  std::vector<double> plus(f.size()), minus(f.size());
  for (std::size_t j = 0; j < f.size(); ++j) {
    plus[j] = f[j] + h[j];
    minus[j] = f[j] - h[j];
  }
  const auto lp = laplacian(psi, ScalarField(grid, plus));
  const auto lm = laplacian(psi, ScalarField(grid, minus));
  std::vector<double> dp(f.size()), dm(f.size()), weight(f.size());
  for (std::size_t j = 0; j < f.size(); ++j) {
    dp[j] = 0.25 * lp[j] * lp[j];
    dm[j] = 0.25 * lm[j] * lm[j];
    weight[j] = std::exp(-f[j]);
  }
  const ScalarField wf(grid, std::move(weight));
  constexpr double n = 1.0;
  return Prop44Bound{dlambda_integrand(psi, f),
                     kKappa / (2.0 * n) * integrate(ScalarField(grid, std::move(dp)), wf),
                     kKappa / (2.0 * n) * integrate(ScalarField(grid, std::move(dm)), wf)};
}

FirstVariationReport first_variation_check(const MetricProfile& psi, const ScalarField& chi,
                                           const std::vector<double>& eps, const EntropyOptions& opts) {
  require_same_grid(psi.grid(), chi.grid());
  require_admissible(psi);
  if (chi[0] != 0.0 || chi[chi.size() - 1] != 0.0) {
    throw Error(ErrorKind::InadmissibleProfile, "perturbation direction must vanish at the poles");
  }
  if (eps.empty()) throw ValidationError("eps", "at least one step is required");
  const auto& grid = psi.grid();
  auto shifted = [&](double e) {
    std::vector<double> v(psi.psi().begin(), psi.psi().end());
    for (std::size_t j = 0; j < v.size(); ++j) v[j] += e * chi[j];
    MetricProfile out(grid, std::move(v));
    require_admissible(out);
    return out;
  };

  FirstVariationReport report;
  const auto base = minimize_w(psi, opts);
  report.multistart_spread = base.multistart_spread;

  // <delta g, S> with delta g = -chi/psi^2 dmu^2 + chi dtheta^2 is chi (s_thth - s_mumu) / psi = -chi f''.
  const double h = grid.spacing();
  std::vector<double> pairing(grid.size());
  for (std::size_t j = 0; j < pairing.size(); ++j) {
    pairing[j] = -chi[j] * detail::d2(base.f.values(), j, h) * std::exp(-base.f[j]);
  }
  report.analytic = -0.5 * kKappa * integrate(ScalarField(grid, std::move(pairing)));

  EntropyOptions single = opts;
  single.multistart = 0;
  for (double e : eps) {
    const double up = minimize_w(shifted(e), single).lambda;
    const double down = minimize_w(shifted(-e), single).lambda;
    const double fd = (up - down) / (2.0 * e);
    report.eps.push_back(e);
    report.finite_difference.push_back(fd);
    report.relative_error.push_back(std::abs(fd - report.analytic) / std::abs(report.analytic));
  }
  if (eps.size() >= 2) {
    const std::size_t k = eps.size() - 1;
    const double ratio = eps[k - 1] / eps[k];
    const double r2 = ratio * ratio;
    report.extrapolated = (r2 * report.finite_difference[k] - report.finite_difference[k - 1]) / (r2 - 1.0);
  } else {
    report.extrapolated = report.finite_difference.front();
  }
  report.extrapolated_relative_error = std::abs(report.extrapolated - report.analytic) / std::abs(report.analytic);
  return report;
}

}  // namespace krf
