#include "krf/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <thread>

#include "krf/entropy.hpp"
#include "krf/flow.hpp"
#include "krf/geometry.hpp"
#include "krf/io.hpp"

namespace krf {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kDecayFloor = 1e-12;

bool prop44_holds(double lhs, double rhs) { return lhs >= rhs - 1e-9 * std::max(lhs, rhs) - 1e-18; }

class Recorder {
 public:
  Recorder(const ExperimentConfig& cfg, RunRecord& record)
      : cfg_(cfg), record_(record), round_(round_profile(Grid::from_nodes(cfg.n_grid))) {
    stride_ = std::max(1L, std::lround(cfg.entropy_every / cfg.record_every));
    entropy_opts_.tol = cfg.entropy_tol;
    entropy_opts_.multistart = cfg.multistart;
  }

  void operator()(const FlowState& state, bool is_final) {
    const auto& psi = state.psi;
    const long index = std::lround(state.t / cfg_.record_every);
    const bool with_entropy = is_final || index % stride_ == 0;

    const auto rp = ricci_potential(psi);
    DiagnosticsRow row;
    if (with_entropy) {
      const auto ent = minimize_w(psi, entropy_opts_);
      row = perelman_diagnostics(psi, rp.h, ent.f);
      row.lambda_hat = ent.lambda_hat;
      row.soliton_resid = hessian_and_soliton_residual(psi, ent.f).l2_weighted;
      const auto bound = prop44_bound(psi, ent.f, rp.h);
      record_.entropy.push_back(EntropySample{state.t, ent.lambda_hat, bound.lhs, bound.lhs, bound.rhs_plus,
                                              bound.rhs_minus, ent.el_residual_l2, ent.iterations});
    } else {
      row = perelman_diagnostics(psi, rp.h, ScalarField::zeros(psi.grid()));
      row.lambda_hat = kNaN;
      row.f_sup = kNaN;
      row.grad_f_l2 = kNaN;
      row.lap_f_l2 = kNaN;
      row.f_weighted_mean = kNaN;
      row.soliton_resid = kNaN;
    }
    row.t = state.t;
    row.k_energy = k_energy(psi);
    row.H = ricci_dissipation(psi, rp.h);
    row.dist_c3_round = c3_distance(psi, round_);
    row.dt = state.dt_last;
    row.a_t = kNaN;
    record_.rows.push_back(row);
    if (is_final) record_.final_profile = psi;
  }

 private:
  const ExperimentConfig& cfg_;
  RunRecord& record_;
  MetricProfile round_;
  long stride_ = 1;
  EntropyOptions entropy_opts_;
};

void fill_tail(RunRecord& record) {
  if (record.rows.empty()) return;
  DissipationSeries series;
  for (const auto& r : record.rows) {
    series.t.push_back(r.t);
    series.H.push_back(r.H);
  }
  try {
    const auto a = a_tail_series(series);
    for (std::size_t i = 0; i < a.size(); ++i) record.rows[i].a_t = a[i];
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::TailNotResolved) throw;
  }
}

void apply_amplitude(ExperimentConfig& cfg, double amp) {
  if (cfg.init == InitKind::Perturbed) cfg.epsilon = amp;
  if (cfg.init == InitKind::Random) cfg.amplitude = amp;
}

double sup_dist(const RunRecord& record) {
  double m = 0.0;
  for (const auto& r : record.rows) m = std::max(m, r.dist_c3_round);
  return m;
}

}  // namespace

MetricProfile initial_profile(const ExperimentConfig& cfg) {
  const auto grid = Grid::from_nodes(cfg.n_grid);
  auto target = [&]() -> MetricProfile {
    switch (cfg.init) {
      case InitKind::Round: return round_profile(grid);
      case InitKind::Perturbed: return perturbed_profile(grid, cfg.epsilon, cfg.mode);
      case InitKind::Random: return random_profile(grid, cfg.seed, cfg.amplitude);
      case InitKind::File: {
        auto p = read_profile_csv(cfg.path);
        if (!(p.grid() == grid)) {
          throw ValidationError("n_grid", "profile file has " + std::to_string(p.grid().size()) + " nodes");
        }
        return p;
      }
    }
    return round_profile(grid);
  }();
  if (cfg.blend == 1.0) return target;
  auto blended = symplectic_blend(round_profile(grid), target, cfg.blend);
  require_admissible(blended);
  return blended;
}

RunRecord run_flow(const ExperimentConfig& cfg) { return run_flow(cfg, initial_profile(cfg)); }

RunRecord run_flow(const ExperimentConfig& cfg, const MetricProfile& psi0) {
  RunRecord record;
  record.config = cfg;
  Recorder recorder(cfg, record);
  FlowHooks hooks;
  hooks.on_record = [&recorder](const FlowState& s, bool is_final) { recorder(s, is_final); };
  try {
    const auto result = evolve(psi0, cfg.flow(), hooks);
    record.converged = result.converged;
    record.t_final = result.final_state.t;
    record.residual_final = result.residual;
  } catch (const BlowUpError& e) {
    record.failure = e.kind();
    record.failure_message = e.what();
    record.blowup = e.state().psi;
    record.final_profile = e.state().psi;
    record.t_final = e.state().t;
    record.residual_final = curvature_residual(e.state().psi);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::NoConvergence) throw;
    record.failure = e.kind();
    record.failure_message = e.what();
    record.t_final = record.rows.empty() ? 0.0 : record.rows.back().t;
  }
  fill_tail(record);
  return record;
}

std::vector<RunRecord> run_many(const std::vector<ExperimentConfig>& configs, int workers, const RunSink& sink) {
  std::vector<std::optional<RunRecord>> slots(configs.size());
  std::vector<std::exception_ptr> errors(configs.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < configs.size(); i = next++) {
      try {
        slots[i] = run_flow(configs[i]);
        if (sink) sink(*slots[i]);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const auto n = static_cast<std::size_t>(std::max(1, workers));
  std::vector<std::thread> pool;
  for (std::size_t k = 1; k < std::min(n, configs.size()); ++k) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  std::vector<RunRecord> out;
  out.reserve(slots.size());
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

DecayFit decay_fit(const std::vector<DiagnosticsRow>& rows, double window) {
  if (!(window > 0.0 && window <= 1.0)) throw ValidationError("window", "must lie in (0, 1]");
  std::vector<const DiagnosticsRow*> usable;
  for (const auto& r : rows) {
    if (!(r.H > kDecayFloor) || !std::isfinite(r.H)) break;
    usable.push_back(&r);
  }
  const auto take = static_cast<std::size_t>(std::floor(window * static_cast<double>(usable.size())));
  if (take < 3) {
    throw Error(ErrorKind::WindowTooShort, "only " + std::to_string(take) + " rows in the fit window");
  }
  const std::size_t first = usable.size() - take;
  double st = 0.0, sy = 0.0;
  for (std::size_t i = first; i < usable.size(); ++i) {
    st += usable[i]->t;
    sy += std::log(usable[i]->H);
  }
  const double m = static_cast<double>(take);
  const double tm = st / m, ym = sy / m;
  double stt = 0.0, sty = 0.0, syy = 0.0;
  for (std::size_t i = first; i < usable.size(); ++i) {
    const double dt = usable[i]->t - tm;
    const double dy = std::log(usable[i]->H) - ym;
    stt += dt * dt;
    sty += dt * dy;
    syy += dy * dy;
  }
  const double slope = sty / stt;
  DecayFit fit;
  fit.delta = -slope;
  fit.prefactor = std::exp(ym - slope * tm);
  fit.r2 = syy > 0.0 ? sty * sty / (stt * syy) : 1.0;
  fit.points = take;
  return fit;
}

double energy_level(const RunRecord& record) {
  std::vector<double> lam;
  for (const auto& r : record.rows) {
    if (std::isfinite(r.lambda_hat)) lam.push_back(r.lambda_hat);
  }
  if (lam.empty()) throw Error(ErrorKind::NotSettled, "no entropy rows recorded");
  if (record.converged) return lam.back();
  if (lam.size() >= 10) {
    const auto [lo, hi] = std::minmax_element(lam.end() - 10, lam.end());
    if (*hi - *lo <= 1e-6) return lam.back();
  }
  throw Error(ErrorKind::NotSettled, "entropy series has not settled");
}

int monotonicity_violations(const RunRecord& record, double tol) {
  int count = 0;
  double prev = kNaN;
  for (const auto& r : record.rows) {
    if (!std::isfinite(r.lambda_hat)) continue;
    if (std::isfinite(prev) && r.lambda_hat < prev - tol) ++count;
    prev = r.lambda_hat;
  }
  return count;
}

RunSummary summarize(const RunRecord& record) {
  RunSummary s;
  s.converged = record.converged;
  s.t_final = record.t_final;
  s.lambda_hat_final = kNaN;
  s.k_energy_final = kNaN;
  if (!record.rows.empty()) {
    s.k_energy_final = record.rows.back().k_energy;
    for (const auto& r : record.rows) {
      if (std::isfinite(r.lambda_hat)) s.lambda_hat_final = r.lambda_hat;
      if (std::isfinite(r.f_sup)) s.max_f_sup = std::max(s.max_f_sup, r.f_sup);
    }
  }
  try {
    const auto fit = decay_fit(record.rows);
    s.decay_delta = fit.delta;
    s.decay_r2 = fit.r2;
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::WindowTooShort) throw;
    s.decay_delta = kNaN;
    s.decay_r2 = kNaN;
  }
  s.monotonicity_violations = monotonicity_violations(record);
  for (const auto& e : record.entropy) {
    if (!(e.prop44_lhs > 0.0 || e.prop44_plus > 0.0 || e.prop44_minus > 0.0)) continue;
    ++s.prop44_checked;
    if (!prop44_holds(e.prop44_lhs, e.prop44_plus)) ++s.prop44_plus_violations;
    if (!prop44_holds(e.prop44_lhs, e.prop44_minus)) ++s.prop44_minus_violations;
  }
  if (s.prop44_checked == 0) {
    s.empirical_sign_prop44 = "n/a";
  } else if (s.prop44_plus_violations == 0 && s.prop44_minus_violations == 0) {
    s.empirical_sign_prop44 = "both";
  } else if (s.prop44_plus_violations == 0) {
    s.empirical_sign_prop44 = "+";
  } else if (s.prop44_minus_violations == 0) {
    s.empirical_sign_prop44 = "-";
  } else {
    s.empirical_sign_prop44 = "none";
  }
  s.sup_dist_c3 = sup_dist(record);
  if (record.failure) s.failure = std::string(to_string(*record.failure)) + ": " + record.failure_message;
  return s;
}

PathReport continuity_path(const ExperimentConfig& target, int n_points, int workers, const RunSink& sink) {
  if (n_points < 2) throw ValidationError("points", "need at least 2 points");
  require_admissible(initial_profile(target));
  std::vector<ExperimentConfig> configs;
  for (int i = 0; i < n_points; ++i) {
    ExperimentConfig c = target;
    c.blend = i == n_points - 1 ? 1.0 : static_cast<double>(i) / (n_points - 1);
    configs.push_back(c);
  }

  PathReport report;
  report.points.resize(configs.size());
  std::atomic<std::size_t> next{0};
  std::mutex sink_mutex;
  auto work = [&] {
    for (std::size_t i = next++; i < configs.size(); i = next++) {
      auto& pt = report.points[i];
      pt.s = configs[i].blend;
      try {
        const auto rec = run_flow(configs[i]);
        if (sink) {
          std::lock_guard lock(sink_mutex);
          sink(rec);
        }
        pt.summary = summarize(rec);
        pt.converged = rec.converged;
        pt.sup_dist = pt.summary.sup_dist_c3;
        if (rec.failure) pt.error = pt.summary.failure;
      } catch (const Error& e) {
        pt.error = std::string(to_string(e.kind())) + ": " + e.what();
      }
    }
  };
  const auto n = static_cast<std::size_t>(std::max(1, workers));
  std::vector<std::thread> pool;
  for (std::size_t k = 1; k < std::min(n, configs.size()); ++k) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  report.all_converged =
      std::all_of(report.points.begin(), report.points.end(), [](const PathPoint& p) { return p.converged; });
  return report;
}

StabilityReport stability_probe(double eps, const ExperimentConfig& direction, double amp_cap, int iterations) {
  if (!(eps > 0.0)) throw ValidationError("eps", "must be positive");
  if (!(amp_cap > 0.0)) throw ValidationError("amp_cap", "must be positive");
  StabilityReport report;
  report.eps = eps;
  report.amp_cap = amp_cap;
  const auto round = round_profile(Grid::from_nodes(direction.n_grid));

  auto probe = [&](double amp) {
    ExperimentConfig cfg = direction;
    apply_amplitude(cfg, amp);
    ProbeStep st;
    st.amplitude = amp;
    try {
      const auto rec = run_flow(cfg);
      st.converged = rec.converged;
      st.sup_dist = sup_dist(rec);
      st.passed = st.converged && st.sup_dist <= eps;
    } catch (const Error&) {
      st.passed = false;
    }
    report.trace.push_back(st);
    return st.passed;
  };

  double lo = 0.0, hi = amp_cap;
  if (probe(amp_cap)) {
    report.saturated = true;
    lo = amp_cap;
  } else {
    for (int i = 0; i < iterations; ++i) {
      const double mid = 0.5 * (lo + hi);
      if (probe(mid)) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
  }
  report.amp_max = lo;
  report.bracket_lo = lo;
  report.bracket_hi = hi;
  if (lo > 0.0) {
    ExperimentConfig cfg = direction;
    apply_amplitude(cfg, lo);
    report.delta_max = c3_distance(initial_profile(cfg), round);
  }
  return report;
}

}  // namespace krf
