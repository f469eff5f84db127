#pragma once

// Photoluminescence readout of the four NV levels, in the fixed order
// (|0>e|1>n, |0>e|0>n, |-1>e|1>n, |-1>e|0>n).

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace ptdilate {

using Populations = std::array<double, 4>;

/// Expected detected photons per readout when all population sits in one level.
struct PLRates {
  std::array<double, 4> n{};

  void validate() const;
};

/// Per-shot rates used for synthetic experiments. Not measured values: bright
/// m_S = 0 levels, a ~30% dimmer m_S = -1 manifold, and a few-percent nuclear
/// contrast so all four levels are distinguishable.
PLRates default_pl_rates();

struct CountRecord {
  std::string sequence_id;
  double counts = 0.0;       // mean photons per shot
  std::int64_t repetitions = 0;  // 0 marks a noise-free expectation
};

/// Calibration sequences, in row order of the calibration matrix.
inline const std::array<std::string, 5> kCalibrationSequences{
    "none", "pi_MW1", "pi_RF1", "pi_MW1+pi_RF1", "pi_MW1+pi_RF2"};

/// Measurement sequences for population inversion.
inline const std::array<std::string, 3> kReadoutSequences{"none", "pi_MW1", "pi_RF1"};

/// 5x4 map from rates to calibration counts for electron polarization p_e
/// (nuclear polarization taken as 1).
Eigen::Matrix<double, 5, 4> calibration_matrix(double p_e);

/// Noise-free calibration counts for given rates.
std::vector<CountRecord> calibration_counts(const PLRates& rates, double p_e);

struct Calibration {
  PLRates rates;
  double residual;  // ||A x - b|| of the least-squares solve
};

/// Least-squares solve of the calibration system. Throws RankDeficient when
/// |p_e - 0.5| < 1e-6 and InvalidArgument on malformed records.
Calibration calibrate_rates(const std::vector<CountRecord>& records, double p_e);

/// 4x4 system relating populations to the three measured counts plus sum P = 1.
Eigen::Matrix4d readout_matrix(const PLRates& rates);

struct PopulationEstimate {
  Populations p{};
  bool clamped = false;  // some component was moved into [0, 1]
};

/// Inverts the readout system. Throws SingularReadout when its condition
/// number exceeds 1e12.
PopulationEstimate populations_from_counts(const std::vector<CountRecord>& records,
                                           const PLRates& rates);

/// Counts of the three readout sequences for populations P. With repetitions
/// > 0 each count is Poisson(repetitions * mean) / repetitions drawn from
/// mt19937_64 seeded by (seed, stream); repetitions = 0 returns the expectation.
std::vector<CountRecord> simulate_counts(const Populations& p, const PLRates& rates,
                                         std::int64_t repetitions, std::uint64_t seed,
                                         std::uint64_t stream = 0);

/// Name recorded in output metadata for the generator used above.
inline constexpr const char* kNoiseGenerator = "mt19937_64+poisson_distribution";

/// P_{0,1n} / (P_{0,1n} + P_{-1,1n}). Throws ZeroSelectionBranch when the
/// denominator is below 1e-12.
double p0_from_populations(const Populations& p);

}  // namespace ptdilate
