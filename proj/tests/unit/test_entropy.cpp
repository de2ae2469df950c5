#include <cmath>
#include <numbers>

#include "doctest.h"
#include "krf/entropy.hpp"
#include "krf/errors.hpp"
#include "krf/functionals.hpp"
#include "krf/geometry.hpp"
#include "support.hpp"

using namespace krf;

namespace {
const double kInvPi = 1.0 / std::numbers::pi;

double mass(const ScalarField& f) {
  std::vector<double> e(f.size());
  for (std::size_t j = 0; j < e.size(); ++j) e[j] = std::exp(-f[j]);
  return integrate(ScalarField(f.grid(), std::move(e)));
}
}  // namespace

TEST_CASE("W at f = 0 is 1/pi on every profile") {
  const Grid g(400);
  CHECK(w_functional(round_profile(g), ScalarField::zeros(g)) == doctest::Approx(kInvPi).epsilon(1e-14));
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    CHECK(std::abs(w_functional(random_profile(g, seed, 0.3), ScalarField::zeros(g)) - kInvPi) < 1e-12);
  }
}

TEST_CASE("W rejects unnormalized f") {
  const Grid g(64);
  try {
    w_functional(round_profile(g), ScalarField::constant(g, 0.5));
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NormalizationViolated);
  }
}

TEST_CASE("W matches an f-form quadrature") {
  const Grid g(400);
  const auto p = random_profile(g, 9, 0.3);
  const auto raw = krf::test::random_smooth_field(g, 9, 2);
  // shift so that int e^-f dV = V
  const double c = std::log(mass(raw) / kVolume);
  std::vector<double> v(g.size());
  for (std::size_t j = 0; j < v.size(); ++j) v[j] = raw[j] + c;
  const ScalarField fn(g, v);
  const auto r = curvature(p).scalar;
  const auto gn = gradient_norm_sq(p, fn);
  std::vector<double> dens(g.size());
  for (std::size_t j = 0; j < dens.size(); ++j) dens[j] = (0.5 * (r[j] + gn[j]) + fn[j]) * std::exp(-fn[j]);
  const double oracle = kKappa * integrate(ScalarField(g, dens));
  CHECK(w_functional(p, fn) == doctest::Approx(oracle).epsilon(1e-4));
}

TEST_CASE("entropy of the round metric") {
  const Grid g(400);
  EntropyOptions opts;
  opts.multistart = 5;
  const auto e = minimize_w(round_profile(g), opts);
  CHECK(std::abs(e.lambda_hat - 1.0) < 1e-8);
  CHECK(e.f.sup_norm() < 1e-6);
  CHECK(e.multistart_spread < 1e-6);
  CHECK(e.lambda == doctest::Approx(kKappa * kVolume * e.lambda_hat));
  CHECK(e.lambda_el == e.lambda_hat);
}

TEST_CASE("entropy of a perturbed metric") {
  const Grid g(400);
  EntropyOptions opts;
  opts.keep_history = true;
  const auto e = minimize_w(perturbed_profile(g, 0.1, 1), opts);
  CHECK(e.lambda_hat < 1.0 - 10.0 * opts.tol);
  CHECK(std::abs(mass(e.f) - kVolume) < 1e-10 * kVolume);
  CHECK(e.el_residual_l2 < opts.tol);
  for (std::size_t j = 0; j < e.u.size(); ++j) CHECK(e.u[j] > 0.0);
  REQUIRE(e.history.size() >= 2);
  for (std::size_t i = 1; i < e.history.size(); ++i) CHECK(e.history[i] <= e.history[i - 1] + 1e-14);
  CHECK(el_residual(perturbed_profile(g, 0.1, 1), e.f, e.lambda_el) < opts.tol);
}

TEST_CASE("minimizer satisfies the f-form equation") {
  const Grid g(400);
  const auto p = random_profile(g, 2, 0.3);
  const auto e = minimize_w(p);
  const auto lap = laplacian(p, e.f);
  const auto gn = gradient_norm_sq(p, e.f);
  const auto r = curvature(p).scalar;
  for (std::size_t j = 10; j + 10 < g.size(); j += 11) {
    const double lhs = lap[j] + e.f[j] + 0.5 * (r[j] - gn[j]);
    CHECK(lhs == doctest::Approx(e.lambda_el).epsilon(1e-4));
  }
}

TEST_CASE("entropy is bounded by its value at the round metric") {
  const Grid g(200);
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto p = random_profile(g, seed, 0.3);
    const auto e = minimize_w(p);
    CHECK(e.lambda_hat <= 1.0 + 1e-8);
    CHECK(e.lambda_hat < 1.0 - 1e-6);
  }
}

TEST_CASE("Euler-Lagrange residual") {
  const Grid g(400);
  const auto r = round_profile(g);
  const auto zero = ScalarField::zeros(g);
  CHECK(el_residual(r, zero, 1.0) < 1e-10);
  const double c = 0.25;
  CHECK(el_residual(r, zero, 1.0 + c) == doctest::Approx(c * std::sqrt(kVolume)).epsilon(1e-10));
  CHECK_THROWS_AS(el_residual(r, ScalarField::zeros(Grid(64)), 1.0), Error);
}

TEST_CASE("entropy solver reports non-convergence") {
  EntropyOptions opts;
  opts.max_iterations = 1;
  try {
    minimize_w(perturbed_profile(Grid(400), 0.1, 1), opts);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NoConvergence);
  }
}

TEST_CASE("dlambda integrand") {
  const Grid g(400);
  CHECK(dlambda_integrand(round_profile(g), ScalarField::zeros(g)) < 1e-20);
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto p = random_profile(g, seed, 0.3);
    CHECK(dlambda_integrand(p, minimize_w(p).f) >= 0.0);
  }
}

TEST_CASE("dissipation bound vanishes at the round metric") {
  const Grid g(400);
  const auto r = round_profile(g);
  const auto b = prop44_bound(r, ScalarField::zeros(g), ricci_potential(r).h);
  CHECK(b.lhs < 1e-20);
  CHECK(b.rhs_plus < 1e-20);
  CHECK(b.rhs_minus < 1e-20);
}

TEST_CASE("first variation") {
  const Grid g(400);
  const auto chi = ScalarField::sample(g, [](double mu) {
    const double q = mu * (2 - mu);
    return q * q;
  });
  const auto chi2 = ScalarField::sample(g, [](double mu) {
    const double q = mu * (2 - mu);
    return 2 * q * q;
  });
  const auto at_round = first_variation_check(round_profile(g), chi, {0.02, 0.01});
  CHECK(std::abs(at_round.analytic) < 1e-14);
  // Only the eps^2 truncation of the central difference is left at a critical point.
  CHECK(std::abs(at_round.finite_difference[0]) < 1e-4);
  CHECK(std::abs(at_round.finite_difference[1]) < 0.3 * std::abs(at_round.finite_difference[0]));

  const auto p = perturbed_profile(g, 0.1, 1);
  const auto a = first_variation_check(p, chi, {0.02, 0.01});
  const auto b = first_variation_check(p, chi2, {0.01, 0.005});
  CHECK(b.analytic == doctest::Approx(2.0 * a.analytic).epsilon(1e-12));
  CHECK(a.extrapolated_relative_error < 1e-3);

  const auto bad = ScalarField::sample(g, [](double) { return 1.0; });
  CHECK_THROWS_AS(first_variation_check(p, bad, {0.01}), Error);
}
