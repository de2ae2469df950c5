#pragma once

#include <cstdint>
#include <string>

#include "krf/flow.hpp"

namespace krf {

enum class InitKind { Round, Perturbed, Random, File };

struct ExperimentConfig {
  std::string geometry = "cp1_profile";
  int n_grid = 401;  ///< node count
  InitKind init = InitKind::Round;
  double epsilon = 0.1;
  int mode = 1;
  std::uint64_t seed = 1;
  double amplitude = 0.3;
  std::string path;
  double blend = 1.0;  ///< symplectic interpolation from round (0) to the initial profile (1)
  double t_max = 50.0;
  double tol_converge = 1e-5;
  double cfl_safety = 0.2;
  double record_every = 0.05;
  double entropy_every = 0.5;
  double entropy_tol = 1e-8;
  std::string output_dir = "runs";
  int multistart = 0;

  FlowConfig flow() const;

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

/// Line-based `key = value` text with `#` comments. Throws ParseError for
/// malformed lines and unknown keys, ValidationError for bad values.
ExperimentConfig parse_config(const std::string& text);

/// Canonical text: every key in a fixed order, shortest round-trip numbers.
std::string render_config(const ExperimentConfig& cfg);

/// FNV-1a of the canonical text with output_dir left out.
std::uint64_t config_hash(const ExperimentConfig& cfg);

/// "run-" followed by the 16 hex digits of config_hash.
std::string run_directory_name(const ExperimentConfig& cfg);

/// Shortest decimal that parses back to the same double; nan / inf spelled out.
std::string format_double(double x);
double parse_double(const std::string& text);

std::string to_string(InitKind kind);

}  // namespace krf
