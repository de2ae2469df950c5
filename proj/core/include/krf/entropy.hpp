#pragma once

#include <cstdint>
#include <numbers>
#include <vector>

#include "krf/grid.hpp"
#include "krf/profile.hpp"

namespace krf {

/// (2 pi)^{-2n} with n = 1.
inline constexpr double kKappa = 1.0 / (4.0 * std::numbers::pi * std::numbers::pi);

struct EntropyOptions {
  double tol = 1e-8;          ///< on the L2(dV) Euler-Lagrange residual, relative to max(1, lambda_hat)
  int max_iterations = 20000;
  int multistart = 0;         ///< extra random positive starting points
  std::uint64_t seed = 1;
  double preconditioner_shift = 1.0;
  bool keep_history = false;  ///< record lambda_hat after every iteration of the first start
};

struct EntropyResult {
  ScalarField f;
  ScalarField u;
  double lambda = 0.0;      ///< kappa * min W
  double lambda_hat = 0.0;  ///< lambda / (kappa V); at most 1
  double lambda_el = 0.0;   ///< constant of the Euler-Lagrange equation, equal to lambda_hat
  double el_residual_l2 = 0.0;
  int iterations = 0;
  double multistart_spread = 0.0;
  std::vector<double> history;
};

/// W(g, f) = kappa int [ (R + |grad f|^2)/2 + f ] e^-f dV, evaluated in the
/// variable u = e^{-f/2}. Throws NormalizationViolated unless
/// int e^-f dV = V within 1e-6 relative.
double w_functional(const MetricProfile& psi, const ScalarField& f);

/// Minimizes W(g, .) under int e^-f dV = V by preconditioned projected gradient
/// descent on u with u^2 on the constraint sphere. Throws NoConvergence.
EntropyResult minimize_w(const MetricProfile& psi, const EntropyOptions& opts = {});

/// L2(dV) norm of  Laplacian f + f + (R - |grad f|^2)/2 - lambda_el.
double el_residual(const MetricProfile& psi, const ScalarField& f, double lambda_el);

/// d lambda / dt along the flow: (kappa / 2) ||Ric - g + Hess f||^2 in L2(e^-f dV).
double dlambda_integrand(const MetricProfile& psi, const ScalarField& f);

/// lhs = dlambda_integrand; rhs_plus / rhs_minus =
///   kappa (1/2n) int |Laplacian_K (f +- h)|^2 e^-f dV
/// with the Kaehler Laplacian Laplacian_K = Laplacian / 2.
struct Prop44Bound {
  double lhs = 0.0;
  double rhs_plus = 0.0;
  double rhs_minus = 0.0;
};

Prop44Bound prop44_bound(const MetricProfile& psi, const ScalarField& f, const ScalarField& h);

struct FirstVariationReport {
  double analytic = 0.0;  ///< -(kappa / 2) int <delta g, S> e^-f dV
  std::vector<double> eps;
  std::vector<double> finite_difference;
  std::vector<double> relative_error;
  double extrapolated = 0.0;
  double extrapolated_relative_error = 0.0;
  double multistart_spread = 0.0;
};

/// Compares centered differences of lambda along psi + eps chi with the first
/// variation formula; eps must be decreasing with a constant ratio for the
/// Richardson step. Throws InadmissibleProfile.
FirstVariationReport first_variation_check(const MetricProfile& psi, const ScalarField& chi,
                                           const std::vector<double>& eps, const EntropyOptions& opts = {});

}  // namespace krf
