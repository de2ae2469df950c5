#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "krf/entropy.hpp"
#include "krf/experiments.hpp"
#include "krf/flow.hpp"

namespace krf {

/// `mu,psi` CSV with shortest round-trip numbers and LF line endings.
void write_profile_csv(const std::filesystem::path& path, const MetricProfile& psi);
MetricProfile read_profile_csv(const std::filesystem::path& path);

/// `mu,<name>` CSV.
void write_field_csv(const std::filesystem::path& path, const ScalarField& field, const std::string& name = "f");

std::string series_csv(const std::vector<DiagnosticsRow>& rows);
std::vector<DiagnosticsRow> parse_series_csv(const std::string& text);

std::string to_json(const EntropyResult& r);
std::string to_json(const RunSummary& s);
std::string to_json(const PathReport& r);
std::string to_json(const StabilityReport& r);
std::string to_json(const Spectrum& s, std::size_t count);
std::string error_json(ErrorKind kind, const std::string& message);

/// Writes config.cfg, series.csv, entropy.csv, summary.json, final.csv and,
/// after a blow-up, blowup.csv. Throws IoError.
void write_run(const RunRecord& record, const std::filesystem::path& dir);
RunRecord read_run(const std::filesystem::path& dir);
RunSummary read_summary(const std::filesystem::path& dir);

/// profile.csv plus state.json {t, dt_last, config_hash}.
void write_checkpoint(const std::filesystem::path& dir, const FlowState& state, std::uint64_t config_hash);

struct Checkpoint {
  FlowState state;
  std::uint64_t config_hash = 0;
};

Checkpoint read_checkpoint(const std::filesystem::path& dir);

std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace krf
