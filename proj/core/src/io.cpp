#include "krf/io.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "json.hpp"
#include "krf/config.hpp"

namespace krf {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// JSON has no NaN; it is written as null and read back as NaN.
json num(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

double num(const json& j) { return j.is_null() ? kNaN : j.get<double>(); }

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, sep)) out.push_back(cell);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) out.push_back(line);
  }
  return out;
}

ErrorKind kind_from_string(const std::string& s) {
  for (int k = 0; k <= static_cast<int>(ErrorKind::IoError); ++k) {
    const auto kind = static_cast<ErrorKind>(k);
    if (to_string(kind) == s) return kind;
  }
  throw Error(ErrorKind::IoError, "unknown error kind " + s);
}

std::vector<std::vector<double>> read_table(const std::string& text, const std::vector<std::string>& header,
                                            const std::string& what) {
  const auto lines = lines_of(text);
  if (lines.empty() || split(lines.front(), ',') != header) {
    throw Error(ErrorKind::IoError, what + ": unexpected header");
  }
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto cells = split(lines[i], ',');
    if (cells.size() != header.size()) {
      throw Error(ErrorKind::IoError, what + ": line " + std::to_string(i + 1) + " has the wrong column count");
    }
    std::vector<double> v;
    for (const auto& c : cells) v.push_back(parse_double(c));
    rows.push_back(std::move(v));
  }
  return rows;
}

std::string two_column_csv(const Grid& grid, std::span<const double> v, const std::string& name) {
  std::string out = "mu," + name + "\n";
  for (std::size_t j = 0; j < v.size(); ++j) {
    out += format_double(grid.node(j)) + "," + format_double(v[j]) + "\n";
  }
  return out;
}

MetricProfile parse_profile(const std::string& text, const std::string& what) {
  const auto rows = read_table(text, {"mu", "psi"}, what);
  if (rows.size() < 2) throw Error(ErrorKind::IoError, what + ": too few rows");
  const auto grid = Grid::from_nodes(static_cast<int>(rows.size()));
  std::vector<double> psi;
  for (std::size_t j = 0; j < rows.size(); ++j) {
    if (std::abs(rows[j][0] - grid.node(j)) > 1e-12) {
      throw Error(ErrorKind::IoError, what + ": mu column is not the uniform grid at row " + std::to_string(j + 2));
    }
    psi.push_back(rows[j][1]);
  }
  return MetricProfile(grid, std::move(psi));
}

json summary_object(const RunSummary& s) {
  return json{{"converged", s.converged},
              {"t_final", num(s.t_final)},
              {"lambda_hat_final", num(s.lambda_hat_final)},
              {"k_energy_final", num(s.k_energy_final)},
              {"decay_delta", num(s.decay_delta)},
              {"decay_r2", num(s.decay_r2)},
              {"max_f_sup", num(s.max_f_sup)},
              {"monotonicity_violations", s.monotonicity_violations},
              {"prop44_checked", s.prop44_checked},
              {"prop44_plus_violations", s.prop44_plus_violations},
              {"prop44_minus_violations", s.prop44_minus_violations},
              {"empirical_sign_prop44", s.empirical_sign_prop44},
              {"sup_dist_c3", num(s.sup_dist_c3)},
              {"failure", s.failure}};
}

RunSummary summary_from(const json& j) {
  RunSummary s;
  s.converged = j.at("converged").get<bool>();
  s.t_final = num(j.at("t_final"));
  s.lambda_hat_final = num(j.at("lambda_hat_final"));
  s.k_energy_final = num(j.at("k_energy_final"));
  s.decay_delta = num(j.at("decay_delta"));
  s.decay_r2 = num(j.at("decay_r2"));
  s.max_f_sup = num(j.at("max_f_sup"));
  s.monotonicity_violations = j.at("monotonicity_violations").get<int>();
  s.prop44_checked = j.at("prop44_checked").get<int>();
  s.prop44_plus_violations = j.at("prop44_plus_violations").get<int>();
  s.prop44_minus_violations = j.at("prop44_minus_violations").get<int>();
  s.empirical_sign_prop44 = j.at("empirical_sign_prop44").get<std::string>();
  s.sup_dist_c3 = num(j.at("sup_dist_c3"));
  s.failure = j.at("failure").get<std::string>();
  return s;
}

const std::vector<std::string> kEntropyHeader = {"t",           "lambda_hat",   "dlambda",     "prop44_lhs",
                                                 "prop44_plus", "prop44_minus", "el_residual", "iterations"};

}  // namespace

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::IoError, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::IoError, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorKind::IoError, "write failed for " + path.string());
}

void write_profile_csv(const fs::path& path, const MetricProfile& psi) {
  write_text(path, two_column_csv(psi.grid(), psi.psi(), "psi"));
}

MetricProfile read_profile_csv(const fs::path& path) { return parse_profile(read_text(path), path.string()); }

void write_field_csv(const fs::path& path, const ScalarField& field, const std::string& name) {
  write_text(path, two_column_csv(field.grid(), field.values(), name));
}

std::string series_csv(const std::vector<DiagnosticsRow>& rows) {
  std::string out;
  const auto& names = DiagnosticsRow::column_names();
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (i) out += ',';
    out += names[i];
  }
  out += '\n';
  for (const auto& r : rows) {
    const auto v = r.to_array();
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i) out += ',';
      out += format_double(v[i]);
    }
    out += '\n';
  }
  return out;
}

std::vector<DiagnosticsRow> parse_series_csv(const std::string& text) {
  const auto& names = DiagnosticsRow::column_names();
  const std::vector<std::string> header(names.begin(), names.end());
  std::vector<DiagnosticsRow> rows;
  for (const auto& v : read_table(text, header, "series.csv")) {
    std::array<double, DiagnosticsRow::kColumns> a{};
    std::copy(v.begin(), v.end(), a.begin());
    rows.push_back(DiagnosticsRow::from_array(a));
  }
  return rows;
}

std::string to_json(const EntropyResult& r) {
  return json{{"lambda", num(r.lambda)},
              {"lambda_hat", num(r.lambda_hat)},
              {"lambda_el", num(r.lambda_el)},
              {"el_residual_l2", num(r.el_residual_l2)},
              {"iterations", r.iterations},
              {"multistart_spread", num(r.multistart_spread)}}
      .dump(2);
}

std::string to_json(const RunSummary& s) { return summary_object(s).dump(2); }

std::string to_json(const PathReport& r) {
  json points = json::array();
  for (const auto& p : r.points) {
    points.push_back({{"s", p.s},
                      {"converged", p.converged},
                      {"sup_dist", num(p.sup_dist)},
                      {"summary", summary_object(p.summary)},
                      {"error", p.error}});
  }
  return json{{"all_converged", r.all_converged}, {"empirical", true}, {"points", points}}.dump(2);
}

std::string to_json(const StabilityReport& r) {
  json trace = json::array();
  for (const auto& st : r.trace) {
    trace.push_back({{"amplitude", st.amplitude},
                     {"converged", st.converged},
                     {"sup_dist", num(st.sup_dist)},
                     {"passed", st.passed}});
  }
  return json{{"eps", r.eps},
              {"amp_cap", r.amp_cap},
              {"amp_max", r.amp_max},
              {"delta_max", r.delta_max},
              {"bracket", {r.bracket_lo, r.bracket_hi}},
              {"saturated", r.saturated},
              {"trace", trace}}
      .dump(2);
}

std::string to_json(const Spectrum& s, std::size_t count) {
  json ev = json::array();
  for (std::size_t i = 0; i < std::min(count, s.eigenvalues.size()); ++i) {
    ev.push_back({{"re", s.eigenvalues[i].real()}, {"im", s.eigenvalues[i].imag()}});
  }
  return json{{"leading_rate", s.leading_rate}, {"near_null", s.near_null}, {"eigenvalues", ev}}.dump(2);
}

std::string error_json(ErrorKind kind, const std::string& message) {
  return json{{"error", std::string(to_string(kind))}, {"message", message}, {"exit_code", exit_code(kind)}}.dump();
}

void write_run(const RunRecord& record, const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::IoError, "cannot create " + dir.string() + ": " + ec.message());
  write_text(dir / "config.cfg", render_config(record.config));
  write_text(dir / "series.csv", series_csv(record.rows));

  std::string ent;
  for (std::size_t i = 0; i < kEntropyHeader.size(); ++i) ent += (i ? "," : "") + kEntropyHeader[i];
  ent += '\n';
  for (const auto& e : record.entropy) {
    ent += format_double(e.t) + ',' + format_double(e.lambda_hat) + ',' + format_double(e.dlambda) + ',' +
           format_double(e.prop44_lhs) + ',' + format_double(e.prop44_plus) + ',' + format_double(e.prop44_minus) +
           ',' + format_double(e.el_residual) + ',' + std::to_string(e.iterations) + '\n';
  }
  write_text(dir / "entropy.csv", ent);

  json summary = summary_object(summarize(record));
  summary["record"] = {{"converged", record.converged},
                       {"t_final", record.t_final},
                       {"residual_final", num(record.residual_final)},
                       {"failure", record.failure ? json(std::string(to_string(*record.failure))) : json(nullptr)},
                       {"failure_message", record.failure_message},
                       {"config_hash", run_directory_name(record.config)}};
  write_text(dir / "summary.json", summary.dump(2) + "\n");

  if (record.final_profile) write_profile_csv(dir / "final.csv", *record.final_profile);
  if (record.blowup) write_profile_csv(dir / "blowup.csv", *record.blowup);
}

RunRecord read_run(const fs::path& dir) {
  RunRecord record;
  record.config = parse_config(read_text(dir / "config.cfg"));
  record.rows = parse_series_csv(read_text(dir / "series.csv"));
  for (const auto& v : read_table(read_text(dir / "entropy.csv"), kEntropyHeader, "entropy.csv")) {
    record.entropy.push_back(
        EntropySample{v[0], v[1], v[2], v[3], v[4], v[5], v[6], static_cast<int>(v[7])});
  }
  json summary;
  try {
    summary = json::parse(read_text(dir / "summary.json"));
    const auto& r = summary.at("record");
    record.converged = r.at("converged").get<bool>();
    record.t_final = r.at("t_final").get<double>();
    record.residual_final = num(r.at("residual_final"));
    if (!r.at("failure").is_null()) record.failure = kind_from_string(r.at("failure").get<std::string>());
    record.failure_message = r.at("failure_message").get<std::string>();
  } catch (const json::exception& e) {
    throw Error(ErrorKind::IoError, "summary.json: " + std::string(e.what()));
  }
  if (fs::exists(dir / "final.csv")) record.final_profile = read_profile_csv(dir / "final.csv");
  if (fs::exists(dir / "blowup.csv")) record.blowup = read_profile_csv(dir / "blowup.csv");
  return record;
}

RunSummary read_summary(const fs::path& dir) {
  try {
    return summary_from(json::parse(read_text(dir / "summary.json")));
  } catch (const json::exception& e) {
    throw Error(ErrorKind::IoError, (dir / "summary.json").string() + ": " + e.what());
  }
}

void write_checkpoint(const fs::path& dir, const FlowState& state, std::uint64_t config_hash) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::IoError, "cannot create " + dir.string() + ": " + ec.message());
  write_profile_csv(dir / "profile.csv", state.psi);
  json j{{"t", state.t}, {"dt_last", state.dt_last}, {"config_hash", config_hash}};
  write_text(dir / "state.json", j.dump(2) + "\n");
}

Checkpoint read_checkpoint(const fs::path& dir) {
  auto psi = read_profile_csv(dir / "profile.csv");
  try {
    const auto j = json::parse(read_text(dir / "state.json"));
    return Checkpoint{FlowState{j.at("t").get<double>(), std::move(psi), j.at("dt_last").get<double>()},
                      j.at("config_hash").get<std::uint64_t>()};
  } catch (const json::exception& e) {
    throw Error(ErrorKind::IoError, "state.json: " + std::string(e.what()));
  }
}

}  // namespace krf
