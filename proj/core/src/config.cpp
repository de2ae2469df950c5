#include "krf/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "krf/errors.hpp"

namespace krf {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double number(const std::string& key, const std::string& value) {
  double x = 0.0;
  const auto* end = value.data() + value.size();
  auto [ptr, ec] = std::from_chars(value.data(), end, x);
  if (ec != std::errc() || ptr != end || !std::isfinite(x)) throw ValidationError(key, "not a number: " + value);
  return x;
}

long long integer(const std::string& key, const std::string& value) {
  long long x = 0;
  const auto* end = value.data() + value.size();
  auto [ptr, ec] = std::from_chars(value.data(), end, x);
  if (ec != std::errc() || ptr != end) throw ValidationError(key, "not an integer: " + value);
  return x;
}

double positive(const std::string& key, const std::string& value) {
  const double x = number(key, value);
  if (!(x > 0.0)) throw ValidationError(key, "must be positive");
  return x;
}

InitKind init_kind(const std::string& value) {
  if (value == "round") return InitKind::Round;
  if (value == "perturbed") return InitKind::Perturbed;
  if (value == "random") return InitKind::Random;
  if (value == "file") return InitKind::File;
  throw ValidationError("init", "expected round, perturbed, random or file, got " + value);
}

void validate(const ExperimentConfig& cfg) {
  if (cfg.n_grid < 33 || cfg.n_grid % 2 == 0) throw ValidationError("n_grid", "must be an odd node count >= 33");
  if (cfg.init == InitKind::File && cfg.path.empty()) throw ValidationError("path", "init = file needs a path");
  if (cfg.mode < 1) throw ValidationError("mode", "must be at least 1");
  if (!(cfg.amplitude >= 0.0 && cfg.amplitude < 1.0)) throw ValidationError("amplitude", "must lie in [0, 1)");
  if (!(cfg.blend >= 0.0 && cfg.blend <= 1.0)) throw ValidationError("blend", "must lie in [0, 1]");
  if (cfg.cfl_safety > 1.0) throw ValidationError("cfl_safety", "must lie in (0, 1]");
  if (cfg.multistart < 0) throw ValidationError("multistart", "must be non-negative");
}

}  // namespace

std::string to_string(InitKind kind) {
  switch (kind) {
    case InitKind::Round: return "round";
    case InitKind::Perturbed: return "perturbed";
    case InitKind::Random: return "random";
    case InitKind::File: return "file";
  }
  return "round";
}

FlowConfig ExperimentConfig::flow() const {
  return FlowConfig{t_max, cfl_safety, tol_converge, record_every, entropy_every};
}

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

double parse_double(const std::string& text) {
  const auto s = trim(text);
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  double x = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw Error(ErrorKind::IoError, "malformed number: " + s);
  }
  return x;
}

ExperimentConfig parse_config(const std::string& text) {
  ExperimentConfig cfg;
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError(line_no, "expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ParseError(line_no, "missing key");

    if (key == "geometry") {
      if (value != "cp1_profile") throw ValidationError(key, "only cp1_profile is supported");
      cfg.geometry = value;
    } else if (key == "n_grid") {
      cfg.n_grid = static_cast<int>(integer(key, value));
      if (cfg.n_grid <= 0) throw ValidationError(key, "must be positive");
    } else if (key == "init") {
      cfg.init = init_kind(value);
    } else if (key == "epsilon") {
      cfg.epsilon = number(key, value);
    } else if (key == "mode") {
      cfg.mode = static_cast<int>(integer(key, value));
    } else if (key == "seed") {
      const auto s = integer(key, value);
      if (s < 0) throw ValidationError(key, "must be non-negative");
      cfg.seed = static_cast<std::uint64_t>(s);
    } else if (key == "amplitude") {
      cfg.amplitude = number(key, value);
    } else if (key == "path") {
      cfg.path = value;
    } else if (key == "blend") {
      cfg.blend = number(key, value);
    } else if (key == "t_max") {
      cfg.t_max = positive(key, value);
    } else if (key == "tol_converge") {
      cfg.tol_converge = positive(key, value);
    } else if (key == "cfl_safety") {
      cfg.cfl_safety = positive(key, value);
    } else if (key == "record_every") {
      cfg.record_every = positive(key, value);
    } else if (key == "entropy_every") {
      cfg.entropy_every = positive(key, value);
    } else if (key == "entropy_tol") {
      cfg.entropy_tol = positive(key, value);
    } else if (key == "output_dir") {
      if (value.empty()) throw ValidationError(key, "must not be empty");
      cfg.output_dir = value;
    } else if (key == "multistart") {
      cfg.multistart = static_cast<int>(integer(key, value));
    } else {
      throw ParseError(line_no, "unknown key '" + key + "'");
    }
  }
  validate(cfg);
  return cfg;
}

std::string render_config(const ExperimentConfig& cfg) {
  std::ostringstream out;
  out << "geometry = " << cfg.geometry << '\n'
      << "n_grid = " << cfg.n_grid << '\n'
      << "init = " << to_string(cfg.init) << '\n'
      << "epsilon = " << format_double(cfg.epsilon) << '\n'
      << "mode = " << cfg.mode << '\n'
      << "seed = " << cfg.seed << '\n'
      << "amplitude = " << format_double(cfg.amplitude) << '\n';
  if (!cfg.path.empty()) out << "path = " << cfg.path << '\n';
  out << "blend = " << format_double(cfg.blend) << '\n'
      << "t_max = " << format_double(cfg.t_max) << '\n'
      << "tol_converge = " << format_double(cfg.tol_converge) << '\n'
      << "cfl_safety = " << format_double(cfg.cfl_safety) << '\n'
      << "record_every = " << format_double(cfg.record_every) << '\n'
      << "entropy_every = " << format_double(cfg.entropy_every) << '\n'
      << "entropy_tol = " << format_double(cfg.entropy_tol) << '\n'
      << "output_dir = " << cfg.output_dir << '\n'
      << "multistart = " << cfg.multistart << '\n';
  return out.str();
}

std::uint64_t config_hash(const ExperimentConfig& cfg) {
  ExperimentConfig key = cfg;
  key.output_dir.clear();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : render_config(key)) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string run_directory_name(const ExperimentConfig& cfg) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "run-%016llx", static_cast<unsigned long long>(config_hash(cfg)));
  return buf;
}

}  // namespace krf
