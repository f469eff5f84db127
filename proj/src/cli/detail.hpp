#pragma once

#include <exception>
#include <functional>
#include <string>
#include <vector>

#include "ptdilate/cli.hpp"

namespace ptdilate::cli::detail {

/// CSV text with a leading "# {metadata}" line.
class CsvWriter {
 public:
  CsvWriter(const nlohmann::json& meta, const std::vector<std::string>& header);

  void row(const std::vector<double>& values);
  const std::string& str() const noexcept { return text_; }

 private:
  std::string text_;
};

/// Runs job(i) for i in [0, n) on at most `workers` threads. Results are the
/// caller's responsibility (index-addressed, so order is deterministic). If
/// any job throws, the exception of the lowest failing index is rethrown after
/// all jobs finish.
void parallel_for(std::size_t n, unsigned workers, const std::function<void(std::size_t)>& job);

/// "0.6" -> "r0.6", used in per-r file names.
std::string r_tag(double r);

std::filesystem::path output_path(const RunConfig& cfg, const std::string& name);

int cmd_dilate(const RunConfig& cfg);
int cmd_simulate(const RunConfig& cfg);
int cmd_sweep(const RunConfig& cfg);
int cmd_pulses(const RunConfig& cfg);
int cmd_fit(const RunConfig& cfg);
int cmd_verify(const RunConfig& cfg);

}  // namespace ptdilate::cli::detail
