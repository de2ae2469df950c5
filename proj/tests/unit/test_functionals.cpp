#include <cmath>
#include <numbers>

#include "doctest.h"
#include "krf/errors.hpp"
#include "krf/functionals.hpp"
#include "krf/geometry.hpp"
#include "support.hpp"

using namespace krf;

namespace {
const double kPi = std::numbers::pi;
}

TEST_CASE("Ricci potential of the round metric vanishes") {
  const auto rp = ricci_potential(round_profile(Grid(400)));
  CHECK(rp.h.sup_norm() < 1e-12);
}

TEST_CASE("Ricci potential normalization and defining property") {
  const Grid g(400);
  const double h2 = g.spacing() * g.spacing();
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto p = random_profile(g, seed, 0.3);
    const auto rp = ricci_potential(p);
    std::vector<double> e(g.size());
    for (std::size_t j = 0; j < e.size(); ++j) e[j] = std::exp(rp.h[j]);
    CHECK(std::abs(integrate(ScalarField(g, e)) - kVolume) < 1e-10 * kVolume);
    const auto lap = laplacian(p, rp.h);
    const auto k = curvature(p).gauss;
    for (std::size_t j = 0; j < g.size(); ++j) CHECK(std::abs(lap[j] - 2.0 * (k[j] - 1.0)) <= 10 * h2);
  }
}

TEST_CASE("Ricci potential of a symmetric profile is even") {
  const Grid g(400);
  const auto rp = ricci_potential(perturbed_profile(g, 0.1, 1));
  const std::size_t m = g.mid();
  CHECK(std::abs(rp.h[m + 1] - rp.h[m - 1]) < 1e-14);
  const auto p = perturbed_profile(g, 0.1, 1);
  const auto lap = laplacian(p, rp.h);
  const auto k = curvature(p).gauss;
  double res = 0.0;
  for (std::size_t j = 0; j < g.size(); ++j) res = std::max(res, std::abs(lap[j] - 2.0 * (k[j] - 1.0)));
  CHECK(res < 10 * g.spacing() * g.spacing());
}

TEST_CASE("curvature moments vanish") {
  const Grid g(400);
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto k = curvature(random_profile(g, seed, 0.3)).gauss;
    std::vector<double> km(g.size()), kmu(g.size());
    for (std::size_t j = 0; j < g.size(); ++j) {
      km[j] = k[j] - 1.0;
      kmu[j] = (k[j] - 1.0) * g.node(j);
    }
    CHECK(std::abs(integrate(ScalarField(g, km))) < 1e-10);
    CHECK(std::abs(integrate(ScalarField(g, kmu))) < 1e-10);
  }
}

TEST_CASE("dissipation") {
  const Grid g(400);
  const auto r = round_profile(g);
  CHECK(ricci_dissipation(r, ricci_potential(r).h) < 1e-20);
  // pi int q (mu - 1)'^2 dmu = 4 pi / 3 for h = mu - 1 on the round metric.
  const auto lin = ScalarField::sample(g, [](double mu) { return mu - 1.0; });
  CHECK(ricci_dissipation(r, lin) == doctest::Approx(4.0 * kPi / 3.0).epsilon(1e-4));
}

TEST_CASE("diagnostics of the round metric") {
  const Grid g(400);
  const auto r = round_profile(g);
  const auto zero = ScalarField::zeros(g);
  const auto row = perelman_diagnostics(r, ricci_potential(r).h, zero);
  CHECK(row.h_sup < 1e-12);
  CHECK(row.grad_h_sup < 1e-12);
  CHECK(row.lap_h_sup < 1e-10);
  CHECK(row.f_sup == 0.0);
  CHECK(row.grad_f_l2 == 0.0);
  CHECK(row.lap_f_l2 == 0.0);
  CHECK(row.f_weighted_mean == 0.0);
  CHECK(row.diam == doctest::Approx(kPi).epsilon(1e-9));
}

TEST_CASE("diagnostics row columns") {
  const auto& names = DiagnosticsRow::column_names();
  CHECK(names.front() == "t");
  CHECK(names[3] == "H");
  CHECK(names.back() == "dt");
  DiagnosticsRow r;
  r.t = 1;
  r.H = 2;
  r.dt = 3;
  r.a_t = 4;
  CHECK(DiagnosticsRow::from_array(r.to_array()) == r);
}

TEST_CASE("K-energy") {
  const Grid g(400);
  const auto r = round_profile(g);
  CHECK(k_energy(r) == 0.0);
  CHECK(k_energy_delta(straight_path(r, r), 4) == 0.0);
  const auto p = perturbed_profile(g, 0.1, 1);
  const double a = k_energy_delta(symplectic_path(r, p), 8);
  const double b = k_energy_delta(straight_path(r, p), 16);
  CHECK(a > 0.0);
  CHECK(std::abs(a - b) < 1e-4 * std::abs(a));
  // reversing the path flips the sign
  CHECK(k_energy_delta(symplectic_path(p, r), 8) == doctest::Approx(-a).epsilon(1e-8));
  CHECK_THROWS_AS(k_energy_delta(straight_path(r, p), 0), ValidationError);
}

TEST_CASE("K-energy is bounded below by the round value") {
  const Grid g(200);
  for (std::uint64_t seed = 1; seed <= 10; ++seed) CHECK(k_energy(random_profile(g, seed, 0.3)) > 0.0);
}

TEST_CASE("weighted Poincare inequality") {
  const Grid g(400);
  const auto r = round_profile(g);
  const auto h0 = ScalarField::zeros(g);
  const auto c = weighted_poincare_check(r, h0, ScalarField::constant(g, 2.0));
  CHECK(c.lhs == 0.0);
  CHECK(std::abs(c.rhs) < 1e-12);
  CHECK(c.pass);
  const auto lin = weighted_poincare_check(r, h0, ScalarField::sample(g, [](double mu) { return mu - 1.0; }));
  CHECK(lin.lhs == doctest::Approx(2 * kPi * 4.0 / 3.0).epsilon(1e-4));
  CHECK(lin.rhs == doctest::Approx(2 * kPi * 2.0 / 3.0).epsilon(1e-4));
  CHECK(lin.lhs >= 2.0 * lin.rhs * (1 - 1e-4));
  CHECK(lin.pass);
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto p = random_profile(g, seed, 0.3);
    const auto chk = weighted_poincare_check(p, ricci_potential(p).h, krf::test::random_smooth_field(g, seed + 50));
    CHECK(chk.pass);
  }
}

TEST_CASE("a_t tail") {
  DissipationSeries zero{{0.0, 0.5, 1.0}, {0.0, 0.0, 0.0}};
  for (double a : a_tail_series(zero)) CHECK(a == 0.0);

  // H = c e^{-4s}: a_t = c e^{-4t} / 5 plus the truncated tail.
  DissipationSeries s;
  const double c = 0.3, dt = 0.01;
  for (int i = 0; i <= 600; ++i) {
    s.t.push_back(i * dt);
    s.H.push_back(c * std::exp(-4.0 * i * dt));
  }
  CHECK_THROWS_AS(a_tail_series(DissipationSeries{{0.0, 1.0}, {1.0, 1e-3}}), Error);
  const auto a = a_tail_series(s);
  for (int i : {0, 100, 300}) {
    const double t = i * dt;
    const double exact = c * (std::exp(-4 * t) - std::exp(t - 6.0) * std::exp(-5 * 6.0)) / 5.0;
    CHECK(a[static_cast<std::size_t>(i)] == doctest::Approx(exact).epsilon(1e-3));
  }
  const auto v = a_tail(s, 1.005);
  CHECK(v.a == doctest::Approx(c * std::exp(-4 * 1.005) / 5.0).epsilon(1e-3));
  CHECK(v.truncation_bound > 0.0);
  // da/dt = a - H
  for (std::size_t i = 100; i < 300; i += 50) {
    const double dadt = (a[i + 1] - a[i - 1]) / (2 * dt);
    CHECK(dadt == doctest::Approx(a[i] - s.H[i]).epsilon(0.05));
  }
  CHECK(a.back() == 0.0);
}

TEST_CASE("smoothing ratio") {
  std::vector<DiagnosticsRow> rows(1);
  CHECK(smoothing_ratio(rows).entries.empty());

  std::vector<DiagnosticsRow> short_run;
  for (int i = 0; i < 5; ++i) {
    DiagnosticsRow r;
    r.t = 0.1 * i;
    r.h_sup = 0.1;
    short_run.push_back(r);
  }
  CHECK_THROWS_AS(smoothing_ratio(short_run), Error);

  std::vector<DiagnosticsRow> run;
  for (int i = 0; i <= 40; ++i) {
    DiagnosticsRow r;
    r.t = 0.1 * i;
    r.h_sup = std::exp(-2.0 * r.t);
    r.grad_h_sup = 2 * r.h_sup;
    r.lap_h_sup = 3 * r.h_sup;
    run.push_back(r);
  }
  const auto table = smoothing_ratio(run);
  CHECK(table.entries.size() == 21);
  CHECK(table.empirical_k == doctest::Approx(5.0 * std::exp(-4.0)).epsilon(1e-9));
}
