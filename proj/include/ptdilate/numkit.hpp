#pragma once

// Dense complex linear-algebra kernels. Everything here is written against
// Eigen::MatrixBase so it works for any complex scalar type and for
// fixed-size as well as dynamic matrices.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ptdilate/errors.hpp"

namespace ptdilate {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline constexpr Complex kI{0.0, 1.0};

/// Uniform time discretization [t0, t1] with n_nodes >= 2 nodes.
class TimeGrid {
 public:
  TimeGrid(double t0, double t1, std::size_t n_nodes);

  double t0() const noexcept { return t0_; }
  double t1() const noexcept { return t1_; }
  std::size_t size() const noexcept { return n_; }
  double dt() const noexcept { return (t1_ - t0_) / static_cast<double>(n_ - 1); }
  double time(std::size_t k) const noexcept {
    return k + 1 == n_ ? t1_ : t0_ + static_cast<double>(k) * dt();
  }
  /// Same interval with every step split into `factor` pieces.
  TimeGrid refined(std::size_t factor) const;

  bool operator==(const TimeGrid&) const = default;

 private:
  double t0_;
  double t1_;
  std::size_t n_;
};

/// Per-node values (operators, states, scalars) over a TimeGrid.
template <typename Value>
struct Series {
  TimeGrid grid;
  std::vector<Value> values;

  std::size_t size() const noexcept { return values.size(); }
  const Value& operator[](std::size_t k) const { return values[k]; }
  Value& operator[](std::size_t k) { return values[k]; }
  const Value& back() const { return values.back(); }
};

using OperatorSeries = Series<ComplexMatrix>;

namespace detail {

template <typename Derived>
void require_square(const Eigen::MatrixBase<Derived>& m, const char* what) {
  if (m.rows() < 1 || m.rows() != m.cols()) {
    throw InvalidArgument(std::string(what) + ": expected a non-empty square matrix, got " +
                          std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
}

}  // namespace detail

/// max |M - M^dagger| over all entries.
template <typename Derived>
typename Derived::RealScalar hermiticity_residual(const Eigen::MatrixBase<Derived>& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

template <typename Derived>
bool is_hermitian(const Eigen::MatrixBase<Derived>& m, typename Derived::RealScalar tol) {
  return m.rows() == m.cols() && hermiticity_residual(m) <= tol;
}

/// Hermiticity tolerance used when a caller does not supply one:
/// 1e-10 relative to the largest entry (absolute below unit scale).
template <typename Derived>
typename Derived::RealScalar default_hermitian_tol(const Eigen::MatrixBase<Derived>& m) {
  using Real = typename Derived::RealScalar;
  return Real(1e-10) * std::max(Real(1), m.cwiseAbs().maxCoeff());
}

/// Spectral (largest singular value) norm.
template <typename Derived>
typename Derived::RealScalar operator_norm(const Eigen::MatrixBase<Derived>& m) {
  using Plain = Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<Plain> svd(m.eval());
  return svd.singularValues()(0);
}

/// (M + M^dagger) / 2
template <typename Derived>
typename Derived::PlainObject hermitian_part(const Eigen::MatrixBase<Derived>& m) {
  using Real = typename Derived::RealScalar;
  return (m + m.adjoint()) / Real(2);
}

template <typename Scalar>
struct HermitianEigen {
  using Real = typename Eigen::NumTraits<Scalar>::Real;
  Eigen::Matrix<Real, Eigen::Dynamic, 1> values;                 // ascending
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> vectors;  // orthonormal columns
};

/// Eigen-decomposition of a Hermitian matrix. Throws NotHermitian when
/// max|M - M^dagger| exceeds `tol`.
template <typename Derived>
HermitianEigen<typename Derived::Scalar> herm_eig(const Eigen::MatrixBase<Derived>& m,
                                                  typename Derived::RealScalar tol) {
  using Scalar = typename Derived::Scalar;
  using Plain = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  detail::require_square(m, "herm_eig");
  const auto residual = hermiticity_residual(m);
  if (!(residual <= tol)) {
    throw NotHermitian("hermiticity residual " + std::to_string(residual) + " exceeds " +
                       std::to_string(tol));
  }
  const Plain sym = hermitian_part(m);
  Eigen::SelfAdjointEigenSolver<Plain> solver(sym);
  return {solver.eigenvalues(), solver.eigenvectors()};
}

/// Matrix exponential by scaling and squaring around a (6,6) Pade core.
/// No normality is assumed, so it is safe for non-Hermitian generators.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> expm(
    const Eigen::MatrixBase<Derived>& a) {
  using Scalar = typename Derived::Scalar;
  using Real = typename Derived::RealScalar;
  using Plain = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  detail::require_square(a, "expm");

  const Real norm1 = a.cwiseAbs().colwise().sum().maxCoeff();
  if (!std::isfinite(static_cast<double>(norm1))) throw InvalidArgument("expm: non-finite input");

  // Scale so that ||A / 2^s||_1 <= 1/2; the (6,6) approximant is then accurate
  // far below double precision.
  int squarings = 0;
  if (norm1 > Real(0.5)) {
    squarings = static_cast<int>(std::ceil(std::log2(static_cast<double>(norm1 / Real(0.5)))));
  }
  const Plain x = a / static_cast<Real>(std::ldexp(1.0, squarings));

  static constexpr double c[] = {1.0,        1.0 / 2.0,     5.0 / 44.0,     1.0 / 66.0,
                                 1.0 / 792.0, 1.0 / 15840.0, 1.0 / 665280.0};
  const auto n = a.rows();
  const Plain id = Plain::Identity(n, n);
  const Plain x2 = x * x;
  const Plain x4 = x2 * x2;
  const Plain x6 = x4 * x2;
  const Plain even = Real(c[0]) * id + Real(c[2]) * x2 + Real(c[4]) * x4 + Real(c[6]) * x6;
  const Plain odd = x * (Real(c[1]) * id + Real(c[3]) * x2 + Real(c[5]) * x4);

  Plain result = (even - odd).partialPivLu().solve(even + odd);
  for (int k = 0; k < squarings; ++k) result = (result * result).eval();
  return result;
}

/// Principal square root of a Hermitian positive semi-definite matrix.
/// Eigenvalues in [-tol, 0) are clamped to zero; anything below -tol throws
/// NotPositive.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> sqrtm_psd(
    const Eigen::MatrixBase<Derived>& m, typename Derived::RealScalar tol = 1e-10) {
  using Real = typename Derived::RealScalar;
  const auto eig = herm_eig(m, std::max(tol, default_hermitian_tol(m)));
  if (eig.values.minCoeff() < -tol) {
    throw NotPositive("smallest eigenvalue " + std::to_string(eig.values.minCoeff()) +
                      " is below -" + std::to_string(tol));
  }
  const auto roots = eig.values.unaryExpr([](Real v) { return std::sqrt(std::max(v, Real(0))); });
  const auto r = (eig.vectors * roots.asDiagonal() * eig.vectors.adjoint()).eval();
  return hermitian_part(r);
}

/// Sylvester kernel in A's eigenbasis: given A = diag(lambda) and C expressed in
/// that basis, returns X with X_ij = C_ij / (lambda_i + lambda_j).
template <typename DerivedL, typename DerivedC>
Eigen::Matrix<typename DerivedC::Scalar, Eigen::Dynamic, Eigen::Dynamic> sylvester_diagonal(
    const Eigen::MatrixBase<DerivedL>& lambda, const Eigen::MatrixBase<DerivedC>& c) {
  using Real = typename DerivedL::Scalar;
  using Plain = Eigen::Matrix<typename DerivedC::Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  const Real scale = lambda.cwiseAbs().maxCoeff();
  Plain x(c.rows(), c.cols());
  for (Eigen::Index i = 0; i < c.rows(); ++i) {
    for (Eigen::Index j = 0; j < c.cols(); ++j) {
      const Real denom = lambda(i) + lambda(j);
      if (!(denom > Real(1e-14) * scale)) {
        throw SingularPair("eigenvalue pair sum " + std::to_string(denom) +
                           " is not positive at (" + std::to_string(i) + "," +
                           std::to_string(j) + ")");
      }
      x(i, j) = c(i, j) / denom;
    }
  }
  return x;
}

/// Solves A X + X A = C for Hermitian X, with A Hermitian positive definite and
/// C Hermitian.
template <typename DerivedA, typename DerivedC>
Eigen::Matrix<typename DerivedA::Scalar, Eigen::Dynamic, Eigen::Dynamic> sylvester_hermitian(
    const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedC>& c) {
  using Plain = Eigen::Matrix<typename DerivedA::Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  detail::require_square(c, "sylvester_hermitian");
  if (a.rows() != c.rows()) throw InvalidArgument("sylvester_hermitian: dimension mismatch");
  if (!is_hermitian(c, default_hermitian_tol(c))) {
    throw NotHermitian("sylvester_hermitian: right-hand side is not Hermitian");
  }
  const auto eig = herm_eig(a, default_hermitian_tol(a));
  const Plain ct = eig.vectors.adjoint() * c * eig.vectors;
  const Plain xt = sylvester_diagonal(eig.values, ct);
  return hermitian_part((eig.vectors * xt * eig.vectors.adjoint()).eval());
}

/// Generator G(t) of an ordered exponential, e.g. G(t) = -i H(t).
using Generator = std::function<ComplexMatrix(double)>;

/// Time-ordered propagator U(t_k) of dU/dt = G(t) U, U(t0) = I, by midpoint
/// exponential stepping: U(t + h) = expm(h G(t + h/2)) U(t). Each grid
/// interval is split into `substeps` steps.
OperatorSeries ordered_propagator(const Generator& generator, const TimeGrid& grid,
                                  int substeps = 1);

/// Inverses U(t_k)^-1 of the propagator above, built from the same steps
/// without explicit inversion: U^-1(t + h) = U^-1(t) expm(-h G(t + h/2)).
OperatorSeries inverse_ordered_propagator(const Generator& generator, const TimeGrid& grid,
                                          int substeps = 1);

/// a (x) b
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

}  // namespace ptdilate
