#include "krf/flow.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <optional>

#include "krf/geometry.hpp"
#include "stencil.hpp"

namespace krf {

namespace {

constexpr int kMaxHalvings = 30;
constexpr double kNearNull = 1e-3;

void rhs_into(std::span<const double> psi, double h, std::vector<double>& out) {
  const std::size_t n = psi.size() - 1;
  out.assign(psi.size(), 0.0);
  for (std::size_t j = 1; j < n; ++j) {
    const double mu = h * static_cast<double>(j);
    const double dp = (psi[j + 1] - psi[j - 1]) / (2.0 * h);
    const double ddp = (psi[j + 1] - 2.0 * psi[j] + psi[j - 1]) / (h * h);
    out[j] = psi[j] + 0.5 * psi[j] * ddp - 0.5 * dp * dp - (mu - 1.0) * dp;
  }
}

}  // namespace

void FlowConfig::validate() const {
  if (!(t_max > 0.0)) throw ValidationError("t_max", "must be positive");
  if (!(cfl_safety > 0.0 && cfl_safety <= 1.0)) throw ValidationError("cfl_safety", "must lie in (0, 1]");
  if (!(tol_converge > 0.0)) throw ValidationError("tol_converge", "must be positive");
  if (!(record_every > 0.0)) throw ValidationError("record_every", "must be positive");
  if (!(entropy_every > 0.0)) throw ValidationError("entropy_every", "must be positive");
}

ScalarField flow_rhs(const MetricProfile& psi) {
  require_admissible(psi);
  std::vector<double> out;
  rhs_into(psi.psi(), psi.grid().spacing(), out);
  return ScalarField(psi.grid(), std::move(out));
}

double max_stable_dt(const MetricProfile& psi, double safety) {
  const double h = psi.grid().spacing();
  return safety * 2.0 * h * h / psi.max_value();
}

FlowState step(const FlowState& state, double dt, double tol_bc) {
  const auto& grid = state.psi.grid();
  const double limit = max_stable_dt(state.psi, 1.0);
  if (!(dt > 0.0) || dt > limit) {
    throw Error(ErrorKind::CflViolation, "dt = " + std::to_string(dt) + " exceeds the stability limit " +
                                             std::to_string(limit));
  }
  const double h = grid.spacing();
  const auto y = state.psi.psi();
  const std::size_t m = y.size();
  std::vector<double> k1, k2, k3, k4, tmp(m);
  rhs_into(y, h, k1);
  for (std::size_t j = 0; j < m; ++j) tmp[j] = y[j] + 0.5 * dt * k1[j];
  rhs_into(tmp, h, k2);
  for (std::size_t j = 0; j < m; ++j) tmp[j] = y[j] + 0.5 * dt * k2[j];
  rhs_into(tmp, h, k3);
  for (std::size_t j = 0; j < m; ++j) tmp[j] = y[j] + dt * k3[j];
  rhs_into(tmp, h, k4);
  std::vector<double> next(m);
  for (std::size_t j = 0; j < m; ++j) next[j] = y[j] + dt / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
  next.front() = 0.0;
  next.back() = 0.0;

  MetricProfile psi(grid, std::move(next));
  const auto report = validate_profile(psi, 10.0 * tol_bc);
  if (!report.admissible()) {
    throw Error(ErrorKind::StepRejected, "step at t = " + std::to_string(state.t) + ": " + report.describe());
  }
  return FlowState{state.t + dt, std::move(psi), dt};
}

BlowUpError::BlowUpError(FlowState last_good, const std::string& message)
    : Error(ErrorKind::BlowUp, message), state_(std::move(last_good)) {}

EvolveResult evolve(const MetricProfile& psi0, const FlowConfig& cfg, const FlowHooks& hooks) {
  cfg.validate();
  require_admissible(psi0);
  auto record = [&](const FlowState& s, bool is_final) {
    if (hooks.on_record) hooks.on_record(s, is_final);
  };

  EvolveResult out{FlowState{0.0, psi0, 0.0}, false, curvature_residual(psi0), 0, 0};
  FlowState& state = out.final_state;
  if (out.residual < cfg.tol_converge) {
    out.converged = true;
    record(state, true);
    return out;
  }
  record(state, false);

  long next_record = 1;
  // Relative slack so that steps landing within roundoff of a record time snap onto it.
  const double snap = 1e-12 * std::max(1.0, cfg.t_max);
  while (true) {
    const double t_record = static_cast<double>(next_record) * cfg.record_every;
    const double t_target = std::min(t_record, cfg.t_max);
    double dt = max_stable_dt(state.psi, cfg.cfl_safety);
    bool lands = false;
    if (state.t + dt >= t_target - snap) {
      dt = t_target - state.t;
      lands = true;
    }

    int halvings = 0;
    std::optional<FlowState> next;
    while (true) {
      try {
        next = step(state, dt);
        break;
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::StepRejected) throw;
        ++out.rejections;
        if (++halvings > kMaxHalvings) {
          throw BlowUpError(state, std::string("admissibility lost: ") + e.what());
        }
        dt *= 0.5;
        lands = false;
      }
    }
    if (lands) next->t = t_target;
    state = std::move(*next);
    ++out.steps;

    out.residual = curvature_residual(state.psi);
    const bool hit_record = lands && t_target == t_record;
    if (hit_record) ++next_record;
    if (out.residual < cfg.tol_converge) {
      out.converged = true;
      record(state, true);
      return out;
    }
    if (state.t >= cfg.t_max - snap) {
      record(state, true);
      return out;
    }
    if (hit_record) record(state, false);
  }
}

Spectrum spectrum_oracle(const Grid& grid) {
  const auto round = round_profile(grid);
  const double h = grid.spacing();
  const std::size_t n = grid.last();
  const std::size_t dim = n - 1;
  // flow_rhs is quadratic in psi, so the centered difference is exact up to roundoff.
  const double eps = 1e-4;
  Eigen::MatrixXd jac(dim, dim);
  std::vector<double> base(round.psi().begin(), round.psi().end());
  std::vector<double> plus, minus;
  for (std::size_t c = 0; c < dim; ++c) {
    auto y = base;
    y[c + 1] += eps;
    rhs_into(y, h, plus);
    y[c + 1] -= 2.0 * eps;
    rhs_into(y, h, minus);
    for (std::size_t r = 0; r < dim; ++r) jac(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
        (plus[r + 1] - minus[r + 1]) / (2.0 * eps);
  }
  Eigen::EigenSolver<Eigen::MatrixXd> solver(jac, false);
  Spectrum out;
  const auto& ev = solver.eigenvalues();
  out.eigenvalues.assign(ev.data(), ev.data() + ev.size());
  std::sort(out.eigenvalues.begin(), out.eigenvalues.end(),
            [](const auto& a, const auto& b) { return a.real() > b.real(); });
  out.leading_rate = -out.eigenvalues.front().real();
  out.near_null = static_cast<std::size_t>(std::count_if(
      out.eigenvalues.begin(), out.eigenvalues.end(), [](const auto& z) { return std::abs(z) < kNearNull; }));
  return out;
}

}  // namespace krf
