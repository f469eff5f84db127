#include "ptdilate/pulse.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace ptdilate {

namespace {

constexpr double kPi = std::numbers::pi;

bool finite_positive(double v) { return std::isfinite(v) && v > 0.0; }

// sigma_z eigenvalues of the electron and nuclear factors for basis index j.
int electron_sign(int j) { return j < 2 ? 1 : -1; }
int nuclear_sign(int j) { return j % 2 == 0 ? 1 : -1; }

// Linear interpolation of a node series at time t.
class Interpolator {
 public:
  explicit Interpolator(const TimeGrid& grid) : grid_(grid) {}

  double operator()(const std::vector<double>& v, double t) const {
    const double x = (t - grid_.t0()) / grid_.dt();
    const auto last = static_cast<double>(grid_.size() - 1);
    const double clamped = std::clamp(x, 0.0, last);
    std::size_t k = static_cast<std::size_t>(std::floor(clamped));
    if (k + 1 >= grid_.size()) k = grid_.size() - 2;
    const double w = clamped - static_cast<double>(k);
    return (1.0 - w) * v[k] + w * v[k + 1];
  }

 private:
  TimeGrid grid_;
};

}  // namespace

void NVParams::validate() const {
  std::vector<std::string> problems;
  if (!finite_positive(D)) problems.push_back("nv.D must be finite and > 0");
  if (!finite_positive(B0)) problems.push_back("nv.B0 must be finite and > 0");
  for (auto [name, v] : {std::pair{"nv.Q", Q}, std::pair{"nv.A_hf", A_hf},
                         std::pair{"nv.gamma_e", gamma_e}, std::pair{"nv.gamma_n", gamma_n}}) {
    if (!std::isfinite(v)) problems.push_back(std::string(name) + " must be finite");
  }
  if (!problems.empty()) throw ValidationError(std::move(problems));
}

StaticHamiltonian subspace_h0(const NVParams& p) {
  p.validate();
  const double a = p.A_hf;
  const double ce = -(p.D - p.omega_e() - a / 2.0);
  const double cn = p.Q + p.omega_n() - a / 2.0;
  ComplexMatrix h0 = ComplexMatrix::Zero(4, 4);
  for (int j = 0; j < 4; ++j) {
    const int se = electron_sign(j);
    const int sn = nuclear_sign(j);
    h0(j, j) = kPi * (ce * se + cn * sn + (a / 2.0) * se * sn);
  }
  const auto e = [&h0](int j) { return h0(j, j).real(); };
  return {h0, {e(2) - e(0), e(3) - e(1)}};
}

NuclearTransitions nuclear_transition_frequencies(const NVParams& p) {
  const ComplexMatrix h0 = subspace_h0(p).h0;
  const auto e = [&h0](int j) { return h0(j, j).real(); };
  return {std::abs(e(1) - e(0)) / (2.0 * kPi), std::abs(e(3) - e(2)) / (2.0 * kPi)};
}

PulseProgram synthesize(const ASeries& a, const TimeGrid& grid, const Carriers& carriers) {
  const std::size_t n = a.size();
  if (n != grid.size()) throw InvalidArgument("synthesize: A-series does not match the grid");
  PulseProgram prog{grid, {}, {}, {}, {}, {}, carriers};
  prog.omega_rabi.resize(n);
  prog.phase.resize(n);
  prog.freq1.resize(n);
  prog.freq2.resize(n);
  prog.frame_a2.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double a1 = a.a[0][k], a2 = a.a[1][k], a3 = a.a[2][k], a4 = a.a[3][k];
    if (!std::isfinite(a1) || !std::isfinite(a2) || !std::isfinite(a3) || !std::isfinite(a4)) {
      throw InvalidArgument("synthesize: non-finite A coefficient at node " + std::to_string(k));
    }
    prog.omega_rabi[k] = std::hypot(a1, a3) / kPi;
    double phi = std::atan2(a3, a1);
    if (k > 0) {
      const double prev = prog.phase[k - 1];
      phi += 2.0 * kPi * std::round((prev - phi) / (2.0 * kPi));
    }
    prog.phase[k] = phi;
    prog.freq1[k] = carriers.mw1 + 2.0 * a4;
    prog.freq2[k] = carriers.mw2 - 2.0 * a4;
    prog.frame_a2[k] = a2;
  }
  return prog;
}

ComplexMatrix rotating_frame_hamiltonian(const PulseProgram& prog, std::size_t k) {
  const double a4 = 0.5 * (prog.freq1[k] - prog.carriers.mw1);
  const double drive = kPi * prog.omega_rabi[k];
  PauliCoeffs c;
  c(Pauli::I, Pauli::Z) = prog.frame_a2[k];
  c(Pauli::Z, Pauli::Z) = a4;
  c(Pauli::X, Pauli::I) = drive * std::cos(prog.phase[k]);
  c(Pauli::Y, Pauli::Z) = drive * std::sin(prog.phase[k]);
  return assemble(c);
}

double rotating_frame_check(const PulseProgram& prog, const ASeries& a) {
  if (prog.size() != a.size()) {
    throw InvalidArgument("rotating_frame_check: program and A-series lengths differ");
  }
  double worst = 0.0;
  for (std::size_t k = 0; k < prog.size(); ++k) {
    const ComplexMatrix diff = rotating_frame_hamiltonian(prog, k) - a.a_operator(k);
    worst = std::max(worst, operator_norm(diff));
  }
  return worst;
}

Trajectory simulate_lab_frame(const PulseProgram& prog, const NVParams& p,
                              const TimeGrid& grid_fine, const CombinedState& initial,
                              std::size_t record_every) {
  if (initial.amplitudes.size() != 4) {
    throw InvalidArgument("simulate_lab_frame: expected a two-qubit initial state");
  }
  if (record_every < 1 || (grid_fine.size() - 1) % record_every != 0) {
    throw InvalidArgument("simulate_lab_frame: record_every must divide the number of steps");
  }
  const double span = prog.grid.t1() - prog.grid.t0();
  if (grid_fine.t0() != prog.grid.t0() || grid_fine.t1() > prog.grid.t1() + 1e-12 * span) {
    throw InvalidArgument("simulate_lab_frame: fine grid must start with the program and stay inside it");
  }

  const StaticHamiltonian stat = subspace_h0(p);
  const double dt = grid_fine.dt();
  const double carrier_cycles =
      dt * std::max(std::abs(prog.carriers.mw1), std::abs(prog.carriers.mw2)) / (2.0 * kPi);
  if (carrier_cycles > 0.02) {
    throw GridTooCoarse("fine grid step covers " + std::to_string(carrier_cycles) +
                        " carrier cycles (limit 0.02)");
  }

  std::vector<double> a4(prog.size());
  for (std::size_t k = 0; k < prog.size(); ++k) {
    a4[k] = 0.5 * (prog.freq1[k] - prog.carriers.mw1);
  }
  const Interpolator at(prog.grid);
  const double t0 = grid_fine.t0();
  double e[4];
  for (int j = 0; j < 4; ++j) e[j] = stat.h0(j, j).real();

  // Interaction picture of H0: only the drive remains, dressed with e^{i (E_j - E_k) t}.
  // Pair (0, 2) is driven by MW1 (nuclear |1>), pair (1, 3) by MW2 (nuclear |0>).
  auto drive = [&](double t, double int_a4) {
    const double s = t - t0;
    const double omega = at(prog.omega_rabi, t);
    const double phi = at(prog.phase, t);
    const double theta1 = prog.carriers.mw1 * s + 2.0 * int_a4;
    const double theta2 = prog.carriers.mw2 * s - 2.0 * int_a4;
    ComplexMatrix v = ComplexMatrix::Zero(4, 4);
    const Complex c02 = 2.0 * kPi * omega * std::cos(theta1 - phi) *
                        std::exp(Complex(0.0, (e[0] - e[2]) * s));
    const Complex c13 = 2.0 * kPi * omega * std::cos(theta2 + phi) *
                        std::exp(Complex(0.0, (e[1] - e[3]) * s));
    v(0, 2) = c02;
    v(2, 0) = std::conj(c02);
    v(1, 3) = c13;
    v(3, 1) = std::conj(c13);
    return v;
  };

  const std::size_t n_out = (grid_fine.size() - 1) / record_every + 1;
  Trajectory traj{TimeGrid(grid_fine.t0(), grid_fine.t1(), n_out), {}, {}, {}};
  traj.states.reserve(n_out);
  traj.p0.reserve(n_out);
  traj.success_prob.reserve(n_out);

  // Rotating-frame state is exp(-i [int A2 I(x)z + int A4 z(x)z]) applied to the
  // interaction-picture state.
  auto record = [&](const ComplexVector& psi_i, double int_a2, double int_a4) {
    ComplexVector psi(4);
    for (int j = 0; j < 4; ++j) {
      const double ph = int_a2 * nuclear_sign(j) + int_a4 * electron_sign(j) * nuclear_sign(j);
      psi(j) = std::exp(Complex(0.0, -ph)) * psi_i(j);
    }
    CombinedState s{psi};
    const PostSelection ps = postselect(s);
    traj.p0.push_back(std::norm(ps.psi(0)));
    traj.success_prob.push_back(ps.success);
    traj.states.push_back(std::move(s));
  };

  ComplexVector psi = initial.amplitudes;
  double int_a2 = 0.0;
  double int_a4 = 0.0;
  record(psi, int_a2, int_a4);
  for (std::size_t j = 0; j + 1 < grid_fine.size(); ++j) {
    const double t = grid_fine.time(j);
    const double h = grid_fine.time(j + 1) - t;
    const double mid = t + 0.5 * h;
    const double a4_t = at(a4, t);
    const double a4_mid = at(a4, mid);
    const double a4_end = at(a4, t + h);
    const double int_a4_mid = int_a4 + 0.25 * h * (a4_t + a4_mid);
    psi = (expm((-kI * h) * drive(mid, int_a4_mid)) * psi).eval();
    int_a4 += 0.5 * h * (a4_t + a4_end);
    int_a2 += 0.5 * h * (at(prog.frame_a2, t) + at(prog.frame_a2, t + h));
    if ((j + 1) % record_every == 0) record(psi, int_a2, int_a4);
  }
  return traj;
}

}  // namespace ptdilate
