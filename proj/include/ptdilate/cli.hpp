#pragma once

// Command-line front end: configuration, output formatting and the
// dilate / simulate / sweep / pulses / fit / verify subcommands.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "ptdilate/pulse.hpp"
#include "ptdilate/readout.hpp"

namespace ptdilate::cli {

inline constexpr const char* kVersion = "1.0.0";
inline constexpr const char* kOutputDirEnv = "PTDILATE_OUTPUT_DIR";

struct RunConfig {
  std::vector<double> r_list;
  double t0 = 0.0;
  double t1 = 8.0;
  std::size_t n_nodes = 8001;
  double margin = 0.1;
  int substeps = 1;
  std::optional<double> m0;
  std::uint64_t seed = 0;
  std::int64_t repetitions = 0;
  double p_e = 0.9;
  PLRates pl_rates = default_pl_rates();
  NVParams nv;
  bool nv_explicit = false;               // a complete "nv" block was supplied
  std::vector<std::string> nv_missing;    // fields absent from a partial "nv" block
  std::string output_dir = "out";
  unsigned workers = 0;                   // 0: hardware concurrency
  std::size_t sample_stride = 100;
  bool lab_audit = false;
  std::vector<double> audit_times{1.0, 2.0, 4.0};
  double fit_lo = 0.0;
  double fit_hi = 2.0;
  std::vector<std::string> inputs;

  /// Canonical JSON form; hashed into output metadata.
  nlohmann::json to_json() const;
};

/// Reads a config document. Every problem found is reported together in one
/// ValidationError; unknown keys are problems too.
RunConfig config_from_json(const nlohmann::json& doc);

/// Checks the config against the needs of `command` and throws a single
/// ValidationError listing every violation.
void validate_config(const RunConfig& cfg, std::string_view command);

/// Shortest decimal string that reads back to the same double.
std::string format_double(double v);

/// 64-bit FNV-1a digest, hex encoded.
std::string fnv1a_hex(std::string_view data);

/// Writes `contents` to `path` via a temporary file and rename.
void write_atomic(const std::filesystem::path& path, const std::string& contents);

/// Metadata object embedded in every output file.
nlohmann::json metadata(const RunConfig& cfg, std::string_view command);

struct CsvTable {
  nlohmann::json meta;  // null when the file has no metadata line
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

/// Parses a CSV written by this tool (optional "# {json}" first line, one
/// header line, numeric rows). Throws SchemaError on malformed content.
CsvTable read_csv(const std::filesystem::path& path);

/// Runs the tool; returns the process exit code (0 ok, 1 validation, 2 numeric).
int run(int argc, const char* const* argv);

}  // namespace ptdilate::cli
