#include "ptdilate/simulator.hpp"

#include <cmath>
#include <string>

#include "ptdilate/dilation.hpp"

namespace ptdilate {

namespace {

// <a| applied to the ancilla factor: returns the system vector sum_q conj(a_q) Psi(i, q).
ComplexVector ancilla_contract(const ComplexVector& psi, const Eigen::Vector2cd& a) {
  const Eigen::Index n = psi.size() / 2;
  ComplexVector out(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    out(i) = std::conj(a(0)) * psi(2 * i) + std::conj(a(1)) * psi(2 * i + 1);
  }
  return out;
}

}  // namespace

CombinedState prepare_initial(const ComplexVector& psi0, double eta0) {
  if (psi0.size() < 1) throw InvalidArgument("prepare_initial: empty system state");
  if (!(std::abs(psi0.norm() - 1.0) <= 1e-12)) {
    throw InvalidArgument("prepare_initial: psi0 must have unit norm");
  }
  if (!(eta0 >= 0.0) || !std::isfinite(eta0)) {
    throw InvalidArgument("prepare_initial: eta0 must be finite and >= 0");
  }
  const Eigen::Vector2cd a = ancilla_minus() + eta0 * ancilla_plus();
  const ComplexMatrix ancilla = a / std::sqrt(1.0 + eta0 * eta0);
  return {kron(psi0, ancilla)};
}

PostSelection postselect(const CombinedState& state) {
  const double total = state.amplitudes.squaredNorm();
  if (!(total > 0.0)) throw ZeroBranch("postselect: state has zero norm");
  ComplexVector branch = ancilla_contract(state.amplitudes, ancilla_minus());
  const double weight = branch.squaredNorm();
  if (!(std::sqrt(weight) >= 1e-30)) {
    throw ZeroBranch("postselect: |-> branch norm " + std::to_string(std::sqrt(weight)));
  }
  branch /= std::sqrt(weight);
  return {std::move(branch), weight / total};
}

Trajectory evolve_dilated(const OperatorSeries& hsa, const CombinedState& initial,
                          int substeps) {
  if (substeps < 1) throw InvalidArgument("evolve_dilated: substeps must be >= 1");
  if (hsa.size() != hsa.grid.size()) {
    throw InvalidArgument("evolve_dilated: series does not match its grid");
  }
  const Eigen::Index dim = initial.amplitudes.size();
  for (std::size_t k = 0; k < hsa.size(); ++k) {
    const ComplexMatrix& h = hsa[k];
    if (h.rows() != dim || h.cols() != dim) {
      throw InvalidArgument("evolve_dilated: Hamiltonian and state dimensions differ");
    }
    if (!is_hermitian(h, default_hermitian_tol(h))) {
      throw NotHermitian("evolve_dilated: H_sa is not Hermitian at node " + std::to_string(k));
    }
  }

  Trajectory traj{hsa.grid, {}, {}, {}};
  const std::size_t n = hsa.size();
  traj.states.reserve(n);
  traj.p0.reserve(n);
  traj.success_prob.reserve(n);

  auto record = [&traj](const ComplexVector& psi) {
    CombinedState s{psi};
    const PostSelection ps = postselect(s);
    traj.p0.push_back(std::norm(ps.psi(0)));
    traj.success_prob.push_back(ps.success);
    traj.states.push_back(std::move(s));
  };

  ComplexVector psi = initial.amplitudes;
  record(psi);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const double h = (hsa.grid.time(k + 1) - hsa.grid.time(k)) / substeps;
    for (int j = 0; j < substeps; ++j) {
      const double w = (j + 0.5) / substeps;
      const ComplexMatrix hmid = (1.0 - w) * hsa[k] + w * hsa[k + 1];
      psi = (expm((-kI * h) * hmid) * psi).eval();
    }
    record(psi);
  }
  return traj;
}

std::vector<double> p0_trajectory(const Trajectory& traj) {
  std::vector<double> out;
  out.reserve(traj.states.size());
  for (const auto& s : traj.states) out.push_back(std::norm(postselect(s).psi(0)));
  return out;
}

std::array<double, 4> level_populations(const CombinedState& state) {
  if (state.amplitudes.size() != 4) {
    throw InvalidArgument("level_populations: expected a two-qubit state");
  }
  const double total = state.amplitudes.squaredNorm();
  const ComplexVector minus = ancilla_contract(state.amplitudes, ancilla_minus());
  const ComplexVector plus = ancilla_contract(state.amplitudes, ancilla_plus());
  return {std::norm(minus(0)) / total, std::norm(plus(0)) / total, std::norm(minus(1)) / total,
          std::norm(plus(1)) / total};
}

}  // namespace ptdilate
