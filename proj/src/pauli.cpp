#include "ptdilate/pauli.hpp"

#include <cmath>
#include <string>

namespace ptdilate {

const ComplexMatrix& sigma(Pauli p) {
  static const std::array<ComplexMatrix, 4> table = [] {
    std::array<ComplexMatrix, 4> m;
    for (auto& x : m) x = ComplexMatrix::Zero(2, 2);
    m[0] << 1.0, 0.0, 0.0, 1.0;
    m[1] << 0.0, 1.0, 1.0, 0.0;
    m[2] << 0.0, -kI, kI, 0.0;
    m[3] << 1.0, 0.0, 0.0, -1.0;
    return m;
  }();
  return table[static_cast<int>(p)];
}

ComplexMatrix pauli_product(Pauli system, Pauli ancilla) {
  return kron(sigma(system), sigma(ancilla));
}

PauliCoeffs pauli_decompose(const ComplexMatrix& op, double tol) {
  if (op.rows() != 4 || op.cols() != 4) {
    throw InvalidArgument("pauli_decompose: expected a 4x4 operator");
  }
  PauliCoeffs out;
  for (Pauli s : kPaulis) {
    for (Pauli a : kPaulis) {
      const Complex v = (pauli_product(s, a) * op).trace() / 4.0;
      out(s, a) = v.real();
      out.max_imag = std::max(out.max_imag, std::abs(v.imag()));
    }
  }
  if (out.max_imag > tol) {
    throw NotHermitian("pauli_decompose: imaginary coefficient " + std::to_string(out.max_imag));
  }
  return out;
}

ComplexMatrix assemble(const PauliCoeffs& coeffs) {
  ComplexMatrix out = ComplexMatrix::Zero(4, 4);
  for (Pauli s : kPaulis) {
    for (Pauli a : kPaulis) {
      if (coeffs(s, a) != 0.0) out += coeffs(s, a) * pauli_product(s, a);
    }
  }
  return out;
}

namespace {

constexpr std::array<std::array<Pauli, 2>, 4> kATerms{{
    {Pauli::X, Pauli::I}, {Pauli::I, Pauli::Z}, {Pauli::Y, Pauli::Z}, {Pauli::Z, Pauli::Z}}};
constexpr std::array<std::array<Pauli, 2>, 4> kBTerms{{
    {Pauli::I, Pauli::I}, {Pauli::Y, Pauli::I}, {Pauli::Z, Pauli::I}, {Pauli::X, Pauli::Z}}};

}  // namespace

ComplexMatrix ASeries::a_operator(std::size_t k) const {
  PauliCoeffs c;
  for (int i = 0; i < 4; ++i) c(kATerms[i][0], kATerms[i][1]) = a[i][k];
  return assemble(c);
}

ASeries extract_a_series(const OperatorSeries& hsa) {
  ASeries out;
  const std::size_t n = hsa.size();
  out.t.resize(n);
  for (auto& col : out.a) col.resize(n);
  for (auto& col : out.b) col.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    const auto& h = hsa[k];
    const PauliCoeffs c = pauli_decompose(h, default_hermitian_tol(h));
    out.t[k] = hsa.grid.time(k);
    for (int i = 0; i < 4; ++i) {
      out.a[i][k] = c(kATerms[i][0], kATerms[i][1]);
      out.b[i][k] = c(kBTerms[i][0], kBTerms[i][1]);
      out.max_a = std::max(out.max_a, std::abs(out.a[i][k]));
      out.max_b = std::max(out.max_b, std::abs(out.b[i][k]));
    }
  }
  out.b_nonvanishing = out.max_b > 1e-6 * out.max_a;
  return out;
}

}  // namespace ptdilate
