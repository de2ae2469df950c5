#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <vector>

#include "krf/errors.hpp"
#include "krf/grid.hpp"
#include "krf/profile.hpp"

namespace krf {

struct FlowState {
  double t = 0.0;
  MetricProfile psi;
  double dt_last = 0.0;
};

struct FlowConfig {
  double t_max = 50.0;
  double cfl_safety = 0.2;
  double tol_converge = 1e-5;
  double record_every = 0.05;
  double entropy_every = 0.5;

  /// Throws ValidationError naming the offending field.
  void validate() const;
};

/// Normalized Kaehler-Ricci flow in the momentum gauge with pinned endpoints:
///   psi_t = psi + psi psi''/2 - psi'^2/2 - (mu - 1) psi'.
/// The end values are exactly 0.
ScalarField flow_rhs(const MetricProfile& psi);

/// safety * 2 dmu^2 / max(psi); the diffusion coefficient is psi/2.
double max_stable_dt(const MetricProfile& psi, double safety);

/// One RK4 step. Throws CflViolation when dt exceeds max_stable_dt(psi, 1) and
/// StepRejected when the result loses positivity or its pole slopes leave
/// 2 +- 10 tol_bc.
FlowState step(const FlowState& state, double dt, double tol_bc = kDefaultTolBc);

/// Thrown by evolve when step halving cannot recover admissibility.
class BlowUpError : public Error {
 public:
  BlowUpError(FlowState last_good, const std::string& message);
  const FlowState& state() const noexcept { return state_; }

 private:
  FlowState state_;
};

struct FlowHooks {
  /// Called at t = 0, at every multiple of record_every and at the final
  /// state; is_final is set exactly once.
  std::function<void(const FlowState&, bool is_final)> on_record;
};

struct EvolveResult {
  FlowState final_state;
  bool converged = false;
  double residual = 0.0;
  std::size_t steps = 0;
  std::size_t rejections = 0;
};

EvolveResult evolve(const MetricProfile& psi0, const FlowConfig& cfg, const FlowHooks& hooks = {});

/// Eigenvalues of the linearization of flow_rhs at the round profile, acting on
/// perturbations that vanish at both poles.
struct Spectrum {
  std::vector<std::complex<double>> eigenvalues;  ///< sorted by real part, largest first
  double leading_rate = 0.0;                      ///< -max Re
  std::size_t near_null = 0;                      ///< |lambda| < 1e-3
};

Spectrum spectrum_oracle(const Grid& grid);

}  // namespace krf
