#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "krf/config.hpp"
#include "krf/errors.hpp"
#include "krf/functionals.hpp"
#include "krf/profile.hpp"

namespace krf {

/// Entropy-side quantities at a row where the minimizer was computed.
struct EntropySample {
  double t = 0.0;
  double lambda_hat = 0.0;
  double dlambda = 0.0;  ///< dlambda_integrand
  double prop44_lhs = 0.0;
  double prop44_plus = 0.0;
  double prop44_minus = 0.0;
  double el_residual = 0.0;
  int iterations = 0;

  friend bool operator==(const EntropySample&, const EntropySample&) = default;
};

struct RunRecord {
  ExperimentConfig config;
  std::vector<DiagnosticsRow> rows;
  std::vector<EntropySample> entropy;
  bool converged = false;
  double t_final = 0.0;
  double residual_final = 0.0;  ///< max |K - 1| at t_final
  std::optional<MetricProfile> final_profile;
  std::optional<MetricProfile> blowup;  ///< last admissible state when the run blew up
  std::optional<ErrorKind> failure;
  std::string failure_message;
};

using RunSink = std::function<void(const RunRecord&)>;

/// Initial profile described by the config, blended symplectically from round.
MetricProfile initial_profile(const ExperimentConfig& cfg);

/// Evolves and records diagnostics every record_every, with the entropy
/// minimizer every entropy_every and at the final row. BlowUp and
/// NoConvergence end the run and are stored in the record.
RunRecord run_flow(const ExperimentConfig& cfg);
RunRecord run_flow(const ExperimentConfig& cfg, const MetricProfile& psi0);

/// Independent runs on `workers` threads; results in input order. The sink, if
/// given, is called once per finished run from the worker thread.
std::vector<RunRecord> run_many(const std::vector<ExperimentConfig>& configs, int workers,
                                const RunSink& sink = {});

struct DecayFit {
  double delta = 0.0;
  double prefactor = 0.0;
  double r2 = 0.0;
  std::size_t points = 0;
};

/// Least squares of log H against t over the last `window` fraction of rows
/// with H above 1e-12. Throws WindowTooShort with fewer than three points.
DecayFit decay_fit(const std::vector<DiagnosticsRow>& rows, double window = 0.5);

/// Final lambda_hat. Throws NotSettled unless the run converged or the last ten
/// entropy rows agree within 1e-6.
double energy_level(const RunRecord& record);

struct RunSummary {
  bool converged = false;
  double t_final = 0.0;
  double lambda_hat_final = 0.0;
  double k_energy_final = 0.0;
  double decay_delta = 0.0;  ///< NaN when the tail is too short to fit
  double decay_r2 = 0.0;
  double max_f_sup = 0.0;
  int monotonicity_violations = 0;
  int prop44_checked = 0;
  int prop44_plus_violations = 0;
  int prop44_minus_violations = 0;
  std::string empirical_sign_prop44;  ///< "+", "-", "both", "none" or "n/a"
  double sup_dist_c3 = 0.0;
  std::string failure;
};

RunSummary summarize(const RunRecord& record);

/// Count of consecutive entropy rows where lambda_hat drops by more than tol.
int monotonicity_violations(const RunRecord& record, double tol = 1e-8);

struct PathPoint {
  double s = 0.0;
  bool converged = false;
  double sup_dist = 0.0;
  RunSummary summary;
  std::string error;
};

struct PathReport {
  std::vector<PathPoint> points;
  bool all_converged = false;
};

/// Runs the flow from symplectic_blend(round, target, s) on an even grid of
/// n_points values of s in [0, 1]. The target is the config's initial profile;
/// each run's config carries blend = s.
PathReport continuity_path(const ExperimentConfig& target, int n_points, int workers, const RunSink& sink = {});

struct ProbeStep {
  double amplitude = 0.0;
  bool converged = false;
  double sup_dist = 0.0;
  bool passed = false;
};

struct StabilityReport {
  double eps = 0.0;
  double amp_cap = 0.0;
  double amp_max = 0.0;    ///< largest passing amplitude found
  double delta_max = 0.0;  ///< C^3 distance to round of the initial profile at amp_max
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
  bool saturated = false;
  std::vector<ProbeStep> trace;
};

/// Bisection on the amplitude of the config's perturbation direction (epsilon
/// for perturbed, amplitude for random). A run passes when it converges and
/// its C^3 distance to round never exceeds eps.
StabilityReport stability_probe(double eps, const ExperimentConfig& direction, double amp_cap, int iterations = 12);

}  // namespace krf
