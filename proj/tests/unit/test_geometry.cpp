#include <cmath>
#include <numbers>

#include "doctest.h"
#include "krf/errors.hpp"
#include "krf/geometry.hpp"
#include "support.hpp"

using namespace krf;
using krf::test::q_of;

namespace {
const double kPi = std::numbers::pi;
}

TEST_CASE("grid invariants") {
  const Grid g(64);
  CHECK(g.size() == 65);
  CHECK(g.node(0) == 0.0);
  CHECK(g.node(g.last()) == 2.0);
  CHECK(g.node(g.mid()) == 1.0);
  const auto nodes = g.nodes();
  for (std::size_t j = 1; j < nodes.size(); ++j) CHECK(nodes[j] > nodes[j - 1]);
  CHECK_THROWS_AS(Grid(31), ValidationError);
  CHECK_THROWS_AS(Grid(33), ValidationError);
  CHECK_THROWS_AS(Grid::from_nodes(400), ValidationError);
  CHECK(Grid::from_nodes(401).n_cells() == 400);
}

TEST_CASE("round profile closed form") {
  const Grid g(64);
  const auto r = round_profile(g);
  for (std::size_t j = 0; j < g.size(); ++j) CHECK(r[j] == q_of(g.node(j)));
  CHECK(r[g.mid()] == 1.0);
  const auto rep = validate_profile(r);
  CHECK(rep.admissible());
  CHECK(rep.left_slope == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(rep.right_slope == doctest::Approx(-2.0).epsilon(1e-12));
}

TEST_CASE("round curvature is one") {
  for (int n : {64, 256, 400}) {
    const auto c = curvature(round_profile(Grid(n)));
    for (std::size_t j = 0; j < c.gauss.size(); ++j) {
      CHECK(std::abs(c.gauss[j] - 1.0) < 1e-10);
      CHECK(c.scalar[j] == 2.0 * c.gauss[j]);
    }
  }
}

TEST_CASE("perturbed profile values") {
  const Grid g(400);
  const auto p = perturbed_profile(g, 0.1, 1);
  // psi = q + 0.1 q^2: psi(1) = 1.1, psi''(1) = -2 + 0.1 (2 q'^2 + 2 q q'') = -2.4.
  CHECK(p[g.mid()] == doctest::Approx(1.1).epsilon(1e-15));
  const double h = g.spacing();
  const double d2 = (p[g.mid() + 1] - 2.0 * p[g.mid()] + p[g.mid() - 1]) / (h * h);
  CHECK(d2 == doctest::Approx(-2.4).epsilon(1e-5));
  const auto c = curvature(p);
  CHECK(c.gauss[g.mid()] == doctest::Approx(1.2).epsilon(1e-5));
  CHECK(validate_profile(p).left_slope == doctest::Approx(2.0).epsilon(1e-4));
  CHECK(perturbed_profile(g, 0.0, 3) == round_profile(g));
  CHECK_THROWS_AS(perturbed_profile(g, -1.5, 1), Error);
}

TEST_CASE("validate_profile across the perturbation family") {
  const Grid g(400);
  for (int k = 1; k <= 3; ++k) {
    for (int i = -6; i <= 6; ++i) {
      const double eps = 0.05 * i;
      CHECK(validate_profile(perturbed_profile(g, eps, k)).admissible());
    }
  }
}

TEST_CASE("validate_profile reports failures") {
  const Grid g(64);
  auto v = krf::test::values(ScalarField::sample(g, q_of));
  v[g.mid()] = -0.1;
  const auto rep = validate_profile(MetricProfile(g, v));
  CHECK_FALSE(rep.interior_positive);
  CHECK(rep.endpoints_zero);
  CHECK_FALSE(rep.admissible());

  auto w = krf::test::values(ScalarField::sample(g, [](double mu) { return 1.1 * q_of(mu); }));
  const auto rep2 = validate_profile(MetricProfile(g, w));
  CHECK_FALSE(rep2.left_slope_ok);
  CHECK_FALSE(rep2.right_slope_ok);
  CHECK_THROWS_AS(require_admissible(MetricProfile(g, w)), Error);
}

TEST_CASE("random profiles are deterministic and admissible") {
  const Grid g(400);
  CHECK(random_profile(g, 7, 0.0) == round_profile(g));
  CHECK(random_profile(g, 11, 0.3) == random_profile(g, 11, 0.3));
  CHECK_FALSE(random_profile(g, 11, 0.3) == random_profile(g, 12, 0.3));
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const auto p = random_profile(g, seed, 0.3);
    CHECK(validate_profile(p).admissible());
    for (std::size_t j = 1; j < g.last(); ++j) {
      const double factor = p[j] / q_of(g.node(j));
      CHECK(factor >= 0.7 - 1e-12);
      CHECK(factor <= 1.3 + 1e-12);
    }
  }
  CHECK_THROWS_AS(random_profile(g, 1, 1.0), ValidationError);
}

TEST_CASE("integrate and Gauss-Bonnet") {
  for (int n : {32, 64, 400, 1000}) {
    const Grid g(n);
    CHECK(integrate(ScalarField::constant(g, 1.0)) == doctest::Approx(4.0 * kPi).epsilon(1e-15));
  }
  const Grid g(400);
  const double h = g.spacing();
  const double quad = integrate(ScalarField::sample(g, [](double mu) { return (mu - 1) * (mu - 1); }));
  CHECK(std::abs(quad - 2.0 * kPi * 2.0 / 3.0) < 2.0 * kPi * h * h);
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto k = curvature(random_profile(g, seed, 0.3)).gauss;
    CHECK(std::abs(integrate(k) - 4.0 * kPi) < 10.0 * h * h);
  }
  CHECK_THROWS_AS(integrate(ScalarField::constant(g, 1.0), ScalarField::constant(Grid(64), 1.0)), Error);
}

TEST_CASE("laplacian") {
  const Grid g(400);
  const auto r = round_profile(g);
  CHECK(laplacian(r, ScalarField::constant(g, 3.0)).sup_norm() == 0.0);
  const auto lin = ScalarField::sample(g, [](double mu) { return mu; });
  const auto d = laplacian(r, lin);
  for (std::size_t j = 1; j < g.last(); ++j) CHECK(std::abs(d[j] - (2.0 - 2.0 * g.node(j))) < 1e-10);
  const auto p = random_profile(g, 5, 0.3);
  const auto dp = laplacian(p, lin);
  const double h = g.spacing();
  for (std::size_t j = 1; j < g.last(); ++j) CHECK(dp[j] == doctest::Approx((p[j + 1] - p[j - 1]) / (2 * h)));
  CHECK_THROWS_AS(laplacian(r, ScalarField::zeros(Grid(64))), Error);
}

TEST_CASE("laplacian is self-adjoint") {
  const Grid g(400);
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto p = random_profile(g, seed, 0.3);
    const auto f = krf::test::random_smooth_field(g, 100 + seed);
    const auto k = krf::test::random_smooth_field(g, 200 + seed);
    const double a = integrate(f, laplacian(p, k));
    const double b = integrate(k, laplacian(p, f));
    const double scale = std::abs(a) + std::abs(b) + 1.0;
    CHECK(std::abs(a - b) < 1e-10 * scale);
  }
}

TEST_CASE("gradient norm") {
  const Grid g(400);
  const auto r = round_profile(g);
  CHECK(gradient_norm_sq(r, ScalarField::constant(g, 2.0)).sup_norm() == 0.0);
  const auto f = ScalarField::sample(g, [](double mu) { return mu - 1.0; });
  const auto gn = gradient_norm_sq(r, f);
  for (std::size_t j = 0; j < g.size(); ++j) CHECK(gn[j] == doctest::Approx(q_of(g.node(j))).epsilon(1e-12));
  const double h = g.spacing();
  CHECK(std::abs(integrate(gn) - 2.0 * kPi * 4.0 / 3.0) < 2.0 * kPi * h * h);
}

TEST_CASE("diameter") {
  const Grid g(400);
  CHECK(std::abs(diameter(round_profile(g)) - kPi) < 1e-6);
  const auto p = perturbed_profile(g, 0.1, 1);
  // With mu = 1 - cos s, q = sin^2 s and the integrand becomes (1 + 0.1 sin^2 s)^(-1/2).
  const double oracle =
      krf::test::simpson([](double s) { return 1.0 / std::sqrt(1.0 + 0.1 * std::sin(s) * std::sin(s)); }, 0.0, kPi,
                         2000);
  CHECK(diameter(p) < kPi);
  CHECK(std::abs(diameter(p) - oracle) < 1e-6);
  CHECK(std::abs(diameter(perturbed_profile(Grid(800), 0.1, 1)) - oracle) < 0.25 * std::abs(diameter(p) - oracle));
  const auto rp = random_profile(g, 3, 0.3);
  CHECK(diameter(rp) == doctest::Approx(diameter(rp.reflected())).epsilon(1e-12));
  CHECK(std::abs(diameter(round_profile(Grid(64))) - kPi) < 1e-12);
}

TEST_CASE("soliton residual") {
  const Grid g(400);
  const auto r = round_profile(g);
  const auto zero = ScalarField::zeros(g);
  const auto s = hessian_and_soliton_residual(r, zero);
  for (std::size_t j = 1; j < g.last(); ++j) {
    CHECK(std::abs(s.s_mumu[j]) < 1e-10);
    CHECK(std::abs(s.s_thth[j]) < 1e-10);
  }
  CHECK(s.l2_weighted < 1e-10);

  const auto p = perturbed_profile(g, 0.1, 1);
  const auto k = curvature(p).gauss;
  const auto sp = hessian_and_soliton_residual(p, zero);
  for (std::size_t j = 1; j < g.last(); j += 7) {
    CHECK(sp.coordinate_thth(p, j) == doctest::Approx((k[j] - 1.0) * p[j]).epsilon(1e-12));
  }
  CHECK(sp.l2_weighted > 0.0);

  // Christoffel oracle on round: Gamma^mu_thth = -psi psi' / 2, so Hess f(d_th, d_th) = psi psi' f' / 2.
  const auto f = ScalarField::sample(g, [](double mu) { return mu; });
  const auto sf = hessian_and_soliton_residual(r, f);
  for (std::size_t j = 1; j < g.last(); j += 5) {
    const double mu = g.node(j);
    const double gamma = -0.5 * q_of(mu) * (2.0 - 2.0 * mu);
    CHECK(sf.coordinate_thth(r, j) == doctest::Approx(-gamma * 1.0).epsilon(1e-10));
  }
}

TEST_CASE("symplectic potential") {
  const Grid g(400);
  const auto u = symplectic_potential(round_profile(g));
  auto xlogx = [](double x) { return x > 0 ? x * std::log(x) : 0.0; };
  for (std::size_t j = 0; j < g.size(); ++j) {
    const double mu = g.node(j);
    CHECK(u[j] == doctest::Approx(0.5 * (xlogx(mu) + xlogx(2.0 - mu))).epsilon(1e-12));
  }
  const auto p = random_profile(g, 4, 0.3);
  const auto up = symplectic_potential(p);
  const double h = g.spacing();
  const std::size_t m = g.mid();
  CHECK(std::abs(up[m]) < 1e-15);
  CHECK(std::abs((up[m + 1] - up[m - 1]) / (2 * h)) < 1e-4);
  for (std::size_t j = 2; j + 2 < g.size(); ++j) {
    const double d2 = (up[j + 1] - 2 * up[j] + up[j - 1]) / (h * h);
    CHECK(d2 > 0.0);
    if (j > 20 && j + 20 < g.size()) CHECK(d2 == doctest::Approx(1.0 / p[j]).epsilon(1e-3));
  }
}

TEST_CASE("c3 distance") {
  const Grid g(400);
  const auto a = random_profile(g, 1, 0.3);
  CHECK(c3_distance(a, a) == 0.0);
  CHECK(c3_distance(a, a.reflected()) == 0.0);
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto x = random_profile(g, 3 * seed, 0.2);
    const auto y = random_profile(g, 3 * seed + 1, 0.2);
    const auto z = random_profile(g, 3 * seed + 2, 0.2);
    CHECK(c3_distance(x, z) <= c3_distance(x, y) + c3_distance(y, z) + 1e-12);
    CHECK(c3_distance(x, y) == doctest::Approx(c3_distance(y, x)));
  }
  CHECK_THROWS_AS(c3_distance(a, round_profile(Grid(64))), Error);
}

TEST_CASE("symplectic blend") {
  const Grid g(400);
  const auto r = round_profile(g);
  const auto p = perturbed_profile(g, 0.25, 2);
  CHECK(symplectic_blend(r, p, 0.0) == r);
  CHECK(symplectic_blend(r, p, 1.0) == p);
  const auto mid = symplectic_blend(r, p, 0.5);
  CHECK(validate_profile(mid).admissible());
  const std::size_t j = g.mid();
  CHECK(1.0 / mid[j] == doctest::Approx(0.5 / r[j] + 0.5 / p[j]));
}
