#pragma once

// Hermitian dilation of a (generally non-Hermitian, time-dependent)
// Hamiltonian H_s(t) onto system (x) ancilla:
//
//   H_sa(t) = Lambda(t) (x) I + Gamma(t) (x) sigma_z
//
// with M(t) = eta^2(t) + I obeying i dM/dt = H_s^dag M - M H_s, eta = sqrt(M - I),
//   Lambda = {H_s + [i deta + eta H_s] eta} M^-1
//   Gamma  = i [H_s eta - eta H_s - i deta] M^-1
// so that post-selecting the ancilla on |-> reproduces i d/dt psi = H_s psi.
//
// M(t) becomes very ill-conditioned in the broken-PT regime (||M|| ~ 1e14 at
// r = 1.4, T = 8), so every stage works from the spectral factorization of M
// obtained by an SVD of the inverse propagator rather than from dense M.

#include <functional>
#include <optional>
#include <vector>

#include "ptdilate/numkit.hpp"

namespace ptdilate {

using HamiltonianFn = std::function<ComplexMatrix(double)>;

/// Wraps a fixed operator as a time-independent Hamiltonian.
HamiltonianFn constant_hamiltonian(ComplexMatrix h);

struct DilationConfig {
  TimeGrid grid;
  double margin = 0.1;  // M(t) >= (1 + margin) on the grid
  int substeps = 1;     // propagator steps per grid interval

  void validate() const;
};

struct InitialMetric {
  double m0;        // M(0) = m0 I
  double mu_prime;  // min over the grid of the smallest eigenvalue of [eps^-1]^dag eps^-1
};

/// Picks M(0) = m0 I with m0 = (1 + margin) / mu'. Throws SingularPropagator
/// when the propagator's condition number exceeds 1e14 on the grid.
InitialMetric choose_initial_m(const HamiltonianFn& hs, const DilationConfig& cfg);

/// M(t_k) = V diag(values) V^dagger, eigenvalues ascending.
struct MetricFrame {
  RealVector values;
  ComplexMatrix vectors;
};

struct MetricSeries {
  OperatorSeries dense;
  std::vector<MetricFrame> frames;
};

/// M(t_k) = [eps^-1(t_k)]^dag (m0 I) eps^-1(t_k). Throws PositivityLost if any
/// eigenvalue of M - I is not positive.
MetricSeries m_series(const HamiltonianFn& hs, double m0, const DilationConfig& cfg);

struct EtaSeries {
  OperatorSeries eta;
  OperatorSeries deta;
  std::vector<ComplexMatrix> deta_frame;  // d eta/dt expressed in M's eigenbasis
};

/// eta = sqrt(M - I) and d eta/dt from eta X + X eta = dM/dt with the exact
/// dM/dt = -i (H_s^dag M - M H_s).
EtaSeries eta_series(const HamiltonianFn& hs, const MetricSeries& metric);

struct LambdaGamma {
  OperatorSeries lambda;
  OperatorSeries gamma;
  /// Hermiticity residual of Lambda and Gamma before symmetrization,
  /// relative to their largest entry.
  std::vector<double> presym_residual;
};

LambdaGamma lambda_gamma(const HamiltonianFn& hs, const MetricSeries& metric,
                         const EtaSeries& eta);

/// Lambda (x) I + Gamma (x) sigma_z, ancilla factor last.
OperatorSeries dilated_hamiltonian(const OperatorSeries& lambda, const OperatorSeries& gamma);

struct DilationResult {
  double m0;
  double mu_prime;
  MetricSeries metric;
  EtaSeries eta;
  LambdaGamma lg;
  OperatorSeries hsa;
};

/// Full pipeline. `m0_override` (must exceed 1) bypasses the automatic choice.
DilationResult dilate(const HamiltonianFn& hs, const DilationConfig& cfg,
                      std::optional<double> m0_override = std::nullopt);

struct DiagnosticsReport {
  double m0 = 0.0;
  double hermiticity = 0.0;          // max ||H_sa - H_sa^dag||_max / ||H_sa||
  double metric_equation = 0.0;      // max ||i d(eta^2)/dt - H^dag M + M H|| / ||M||, 4th-order central differences
  double block_antisymmetry = 0.0;   // max ||H^(-+) + H^(+-)|| / ||H_sa||, ancilla basis {|+>, |->}
  double defining_relations = 0.0;   // max residual of the two block equations that make |-> post-selection exact
  double presym_hermiticity = 0.0;   // max pre-symmetrization residual of Lambda, Gamma
  double min_eig_m_minus_i = 0.0;    // min over the grid
  double eta_m_commutator = 0.0;     // max ||[eta, M]|| / ||M||
};

DiagnosticsReport verify_dilation(const DilationResult& result, const HamiltonianFn& hs);

/// Ancilla basis states |-> = (|0> - i|1>)/sqrt2 and |+> = -i(|0> + i|1>)/sqrt2.
Eigen::Vector2cd ancilla_minus();
Eigen::Vector2cd ancilla_plus();

}  // namespace ptdilate
