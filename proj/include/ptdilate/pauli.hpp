#pragma once

// Two-qubit Pauli product basis, system factor first: sigma_i (x) sigma_j with
// i, j in (I, x, y, z).

#include <array>
#include <vector>

#include "ptdilate/numkit.hpp"

namespace ptdilate {

enum class Pauli { I = 0, X = 1, Y = 2, Z = 3 };

inline constexpr std::array<Pauli, 4> kPaulis{Pauli::I, Pauli::X, Pauli::Y, Pauli::Z};

/// 2x2 Pauli matrix.
const ComplexMatrix& sigma(Pauli p);

/// sigma_i (x) sigma_j
ComplexMatrix pauli_product(Pauli system, Pauli ancilla);

struct PauliCoeffs {
  std::array<std::array<double, 4>, 4> c{};  // c[system][ancilla]
  double max_imag = 0.0;                     // largest discarded imaginary part

  double& operator()(Pauli s, Pauli a) { return c[static_cast<int>(s)][static_cast<int>(a)]; }
  double operator()(Pauli s, Pauli a) const { return c[static_cast<int>(s)][static_cast<int>(a)]; }
};

/// c_ij = Re Tr[(sigma_i (x) sigma_j) O] / 4 for a 4x4 Hermitian O. Throws
/// NotHermitian if any Tr[...]/4 has imaginary part above `tol`.
PauliCoeffs pauli_decompose(const ComplexMatrix& op, double tol = 1e-10);

/// Sum_ij c_ij sigma_i (x) sigma_j
ComplexMatrix assemble(const PauliCoeffs& coeffs);

/// Coefficient trajectories of
///   H = A1 x(x)I + A2 I(x)z + A3 y(x)z + A4 z(x)z   (+ B1 I(x)I + B2 y(x)I + B3 z(x)I + B4 x(x)z)
/// The B terms vanish for the two-level PT family and are kept as diagnostics.
struct ASeries {
  std::vector<double> t;
  std::array<std::vector<double>, 4> a;
  std::array<std::vector<double>, 4> b;
  double max_a = 0.0;
  double max_b = 0.0;
  bool b_nonvanishing = false;  // max|B| > 1e-6 max|A|

  std::size_t size() const noexcept { return t.size(); }
  /// A-form operator at node k (B terms dropped).
  ComplexMatrix a_operator(std::size_t k) const;
};

ASeries extract_a_series(const OperatorSeries& hsa);

}  // namespace ptdilate
