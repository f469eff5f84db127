#pragma once

// NV-center realization of the A-form Hamiltonian
//   A1 x(x)I + A2 I(x)z + A3 y(x)z + A4 z(x)z
// on the two-qubit subspace {|0>e|1>n, |0>e|0>n, |-1>e|1>n, |-1>e|0>n}: electron
// first, nuclear |1>n as the first nuclear index. Frequencies are in MHz, times
// in microseconds, angular frequencies in rad/us.

#include <string>
#include <vector>

#include "ptdilate/numkit.hpp"
#include "ptdilate/pauli.hpp"
#include "ptdilate/simulator.hpp"

namespace ptdilate {

struct NVParams {
  double D = 2870.0;          // zero-field splitting
  double Q = -4.95;           // nuclear quadrupole splitting
  double A_hf = -2.16;        // hyperfine coupling
  double B0 = 506.0;          // field in gauss
  double gamma_e = -2.8025;   // electron gyromagnetic ratio / 2pi, MHz/G
  double gamma_n = 0.3077e-3; // 14N gyromagnetic ratio / 2pi, MHz/G

  double omega_e() const { return -gamma_e * B0; }
  double omega_n() const { return -gamma_n * B0; }
  void validate() const;
};

struct Carriers {
  double mw1;  // |0>e|1>n <-> |-1>e|1>n, rad/us
  double mw2;  // |0>e|0>n <-> |-1>e|0>n, rad/us
};

struct StaticHamiltonian {
  ComplexMatrix h0;  // diagonal, rad/us
  Carriers carriers;
};

StaticHamiltonian subspace_h0(const NVParams& p);

/// Nuclear transition frequencies in MHz (positive) within m_S = 0 and m_S = -1.
struct NuclearTransitions {
  double ms0;
  double ms_minus1;
};

NuclearTransitions nuclear_transition_frequencies(const NVParams& p);

struct PulseProgram {
  TimeGrid grid;
  std::vector<double> omega_rabi;  // Omega(t) with pi Omega = sqrt(A1^2 + A3^2)
  std::vector<double> phase;       // phi(t) = atan2(A3, A1), unwrapped
  std::vector<double> freq1;       // omega_1(t) = mw1 + 2 A4(t)
  std::vector<double> freq2;       // omega_2(t) = mw2 - 2 A4(t)
  std::vector<double> frame_a2;    // A2(t), carried by the rotating frame only
  Carriers carriers;

  std::size_t size() const noexcept { return omega_rabi.size(); }
};

/// Throws InvalidArgument if the series holds non-finite values.
PulseProgram synthesize(const ASeries& a, const TimeGrid& grid, const Carriers& carriers);

/// Rotating-frame Hamiltonian rebuilt from the program at node k:
/// A2 I(x)z + A4 z(x)z + pi Omega cos(phi) x(x)I + pi Omega sin(phi) y(x)z.
ComplexMatrix rotating_frame_hamiltonian(const PulseProgram& prog, std::size_t k);

/// max_k || H_rot(t_k) - A-form(t_k) || in spectral norm.
double rotating_frame_check(const PulseProgram& prog, const ASeries& a);

/// Integrates the selective cosine drives on top of H0 without the rotating-wave
/// approximation and maps each recorded state into the rotating frame, so it is
/// directly comparable with the dilated evolution. The drive is handled in the
/// interaction picture of H0 (an exact change of variables), which keeps the
/// step error set by the drive rather than by the GHz carrier. States are
/// recorded every `record_every` fine steps.
/// Throws GridTooCoarse if dt times the largest carrier frequency exceeds 0.02
/// cycles.
Trajectory simulate_lab_frame(const PulseProgram& prog, const NVParams& p,
                              const TimeGrid& grid_fine, const CombinedState& initial,
                              std::size_t record_every = 1);

}  // namespace ptdilate
