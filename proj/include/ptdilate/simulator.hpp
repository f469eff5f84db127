#pragma once

// Evolution of system (x) ancilla under a dilated Hamiltonian series and
// post-selection of the ancilla on |->.

#include <array>
#include <vector>

#include "ptdilate/numkit.hpp"

namespace ptdilate {

/// Amplitudes over |s> (x) |a>, ancilla index fastest: (|0>|0>, |0>|1>, |1>|0>, |1>|1>)
/// for a qubit system.
struct CombinedState {
  ComplexVector amplitudes;

  double norm() const { return amplitudes.norm(); }
  Eigen::Index system_dim() const { return amplitudes.size() / 2; }
};

/// (|psi0>|-> + eta0 |psi0>|+>) / sqrt(1 + eta0^2)
CombinedState prepare_initial(const ComplexVector& psi0, double eta0);

struct Trajectory {
  TimeGrid grid;
  std::vector<CombinedState> states;
  std::vector<double> p0;            // |<0|psi_cond>|^2
  std::vector<double> success_prob;  // weight of the |-> branch
};

/// Steps U = expm(-i h H(mid)) across each grid interval. With substeps > 1 the
/// Hamiltonian at each sub-midpoint is the linear interpolation between nodes.
/// Throws NotHermitian if a node is not Hermitian.
Trajectory evolve_dilated(const OperatorSeries& hsa, const CombinedState& initial,
                          int substeps = 1);

struct PostSelection {
  ComplexVector psi;  // normalized conditional system state
  double success;
};

/// Projects the ancilla onto |->. Throws ZeroBranch when the branch norm is
/// below 1e-30.
PostSelection postselect(const CombinedState& state);

/// P0 at every node, recomputed from the stored states.
std::vector<double> p0_trajectory(const Trajectory& traj);

/// Level populations (P_{0,1n}, P_{0,0n}, P_{-1,1n}, P_{-1,0n}) read out after the
/// nuclear pi/2 rotation that maps |-> to |1>_n and |+> to |0>_n. Qubit system only.
std::array<double, 4> level_populations(const CombinedState& state);

}  // namespace ptdilate
