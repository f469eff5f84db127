#include "ptdilate/readout.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "ptdilate/errors.hpp"

namespace ptdilate {

void PLRates::validate() const {
  for (double v : n) {
    if (!std::isfinite(v) || v < 0.0) throw InvalidArgument("PL rates must be finite and >= 0");
  }
}

PLRates default_pl_rates() { return {{0.030, 0.028, 0.021, 0.020}}; }

Eigen::Matrix<double, 5, 4> calibration_matrix(double p_e) {
  if (!std::isfinite(p_e) || p_e <= 0.0 || p_e > 1.0) {
    throw InvalidArgument("electron polarization must lie in (0, 1]");
  }
  const double q = 1.0 - p_e;
  Eigen::Matrix<double, 5, 4> a;
  a << p_e, 0, q, 0,
       q, 0, p_e, 0,
       0, p_e, q, 0,
       0, q, p_e, 0,
       q, 0, 0, p_e;
  return a;
}

std::vector<CountRecord> calibration_counts(const PLRates& rates, double p_e) {
  rates.validate();
  const Eigen::Vector4d x(rates.n[0], rates.n[1], rates.n[2], rates.n[3]);
  const Eigen::Matrix<double, 5, 1> b = calibration_matrix(p_e) * x;
  std::vector<CountRecord> out;
  for (int i = 0; i < 5; ++i) out.push_back({kCalibrationSequences[i], b(i), 0});
  return out;
}

namespace {

const CountRecord& find_record(const std::vector<CountRecord>& records, const std::string& id) {
  const auto it = std::find_if(records.begin(), records.end(),
                               [&id](const CountRecord& r) { return r.sequence_id == id; });
  if (it == records.end()) throw InvalidArgument("missing count record for sequence '" + id + "'");
  if (!std::isfinite(it->counts) || it->counts < 0.0) {
    throw InvalidArgument("count record '" + id + "' must be finite and >= 0");
  }
  return *it;
}

}  // namespace

Calibration calibrate_rates(const std::vector<CountRecord>& records, double p_e) {
  const Eigen::Matrix<double, 5, 4> a = calibration_matrix(p_e);
  if (std::abs(p_e - 0.5) < 1e-6) {
    throw RankDeficient("calibration system is rank deficient at p_e = 0.5");
  }
  Eigen::Matrix<double, 5, 1> b;
  for (int i = 0; i < 5; ++i) b(i) = find_record(records, kCalibrationSequences[i]).counts;
  const Eigen::Vector4d x = a.colPivHouseholderQr().solve(b);
  Calibration out{{{x(0), x(1), x(2), x(3)}}, (a * x - b).norm()};
  return out;
}

Eigen::Matrix4d readout_matrix(const PLRates& rates) {
  rates.validate();
  const auto& [n01, n00, nm11, nm10] = rates.n;
  Eigen::Matrix4d m;
  m << n01, n00, nm11, nm10,
       nm11, n00, n01, nm10,
       n00, n01, nm11, nm10,
       1, 1, 1, 1;
  return m;
}

PopulationEstimate populations_from_counts(const std::vector<CountRecord>& records,
                                           const PLRates& rates) {
  const Eigen::Matrix4d m = readout_matrix(rates);
  Eigen::JacobiSVD<Eigen::Matrix4d> svd(m);
  const auto& sv = svd.singularValues();
  if (!(sv(3) > 0.0) || !(sv(0) / sv(3) <= 1e12)) {
    throw SingularReadout("readout matrix condition number exceeds 1e12");
  }
  Eigen::Vector4d b;
  for (int i = 0; i < 3; ++i) b(i) = find_record(records, kReadoutSequences[i]).counts;
  b(3) = 1.0;
  const Eigen::Vector4d x = m.partialPivLu().solve(b);
  PopulationEstimate out;
  for (int i = 0; i < 4; ++i) {
    out.p[i] = std::clamp(x(i), 0.0, 1.0);
    if (out.p[i] != x(i)) out.clamped = true;
  }
  return out;
}

std::vector<CountRecord> simulate_counts(const Populations& p, const PLRates& rates,
                                         std::int64_t repetitions, std::uint64_t seed,
                                         std::uint64_t stream) {
  double total = 0.0;
  for (double v : p) {
    if (!std::isfinite(v) || v < -1e-12) throw InvalidArgument("populations must be >= 0");
    total += v;
  }
  if (std::abs(total - 1.0) > 1e-9) throw InvalidArgument("populations must sum to 1");
  if (repetitions < 0) throw InvalidArgument("repetitions must be >= 0");

  const Eigen::Vector4d pv(p[0], p[1], p[2], p[3]);
  const Eigen::Vector4d mean = readout_matrix(rates) * pv;
  std::vector<CountRecord> out;
  if (repetitions == 0) {
    for (int i = 0; i < 3; ++i) out.push_back({kReadoutSequences[i], mean(i), 0});
    return out;
  }
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  std::mt19937_64 rng(seq);
  const double reps = static_cast<double>(repetitions);
  for (int i = 0; i < 3; ++i) {
    double counts = 0.0;
    if (mean(i) > 0.0) {
      std::poisson_distribution<std::int64_t> dist(mean(i) * reps);
      counts = static_cast<double>(dist(rng)) / reps;
    }
    out.push_back({kReadoutSequences[i], counts, repetitions});
  }
  return out;
}

double p0_from_populations(const Populations& p) {
  const double denom = p[0] + p[2];
  if (!(denom >= 1e-12)) {
    throw ZeroSelectionBranch("selected-branch population " + std::to_string(denom) +
                              " is below 1e-12");
  }
  return p[0] / denom;
}

}  // namespace ptdilate
