#pragma once

#include "krf/grid.hpp"
#include "krf/profile.hpp"

namespace krf {

/// Gaussian curvature K and scalar curvature R = 2K of a profile.
struct Curvature {
  ScalarField gauss;
  ScalarField scalar;
};

/// K = -psi''/2 by centered differences; the pole nodes hold the half-cell
/// average from Gauss-Bonnet, which makes integrate(K) = 4 pi exact.
Curvature curvature(const MetricProfile& psi);

/// Max over nodes of |K - 1|; the convergence metric of the flow.
double curvature_residual(const MetricProfile& psi);

/// Laplace-Beltrami operator (psi f')' on invariant functions, conservative
/// form; self-adjoint for the trapezoid inner product.
ScalarField laplacian(const MetricProfile& psi, const ScalarField& f);

/// |grad f|^2 = psi (f')^2 with centered differences.
ScalarField gradient_norm_sq(const MetricProfile& psi, const ScalarField& f);

/// 2 pi * trapezoid(field) over [0, 2], i.e. the integral against dV.
double integrate(const ScalarField& field);
double integrate(const ScalarField& field, const ScalarField& weight);

/// Pole-to-pole distance, the integral of dmu / sqrt(psi).
double diameter(const MetricProfile& psi);

/// S = Ric - g + Hess f, stored in the orthonormal frame e_mu = sqrt(psi) d_mu,
/// e_theta = d_theta / sqrt(psi) so that the pole values stay finite:
///   s_mumu = psi * S_mumu = (K - 1) + psi f'' + psi' f' / 2
///   s_thth = S_thth / psi = (K - 1) + psi' f' / 2
/// l2_weighted is the L2(e^-f dV) norm with the Riemannian contraction.
struct SolitonResidual {
  ScalarField s_mumu;
  ScalarField s_thth;
  double l2_weighted = 0.0;

  /// Coordinate components S(d_mu, d_mu) and S(d_theta, d_theta) at an interior node.
  double coordinate_mumu(const MetricProfile& psi, std::size_t j) const;
  double coordinate_thth(const MetricProfile& psi, std::size_t j) const;
};

SolitonResidual hessian_and_soliton_residual(const MetricProfile& psi, const ScalarField& f);

/// Symplectic potential u with u'' = 1/psi and u(1) = u'(1) = 0.
ScalarField symplectic_potential(const MetricProfile& psi);

/// C^3 distance modulo the reflection mu -> 2 - mu.
double c3_distance(const MetricProfile& a, const MetricProfile& b);

}  // namespace krf
