#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "ptdilate/numkit.hpp"

using namespace ptdilate;

namespace {

ComplexMatrix random_matrix(std::mt19937_64& rng, int n, double scale) {
  std::normal_distribution<double> g(0.0, 1.0);
  ComplexMatrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = scale * Complex(g(rng), g(rng));
  return m;
}

double rel_err(const ComplexMatrix& a, const ComplexMatrix& b) {
  return (a - b).norm() / std::max(1.0, b.norm());
}

}  // namespace

TEST_CASE("TimeGrid nodes and validation") {
  const TimeGrid g(0.0, 8.0, 8001);
  CHECK(g.size() == 8001);
  CHECK(g.dt() == doctest::Approx(1e-3));
  CHECK(g.time(0) == 0.0);
  CHECK(g.time(8000) == 8.0);
  CHECK(g.refined(2).size() == 16001);
  CHECK_THROWS_AS(TimeGrid(1.0, 1.0, 10), InvalidArgument);
  CHECK_THROWS_AS(TimeGrid(0.0, 1.0, 1), InvalidArgument);
  CHECK_THROWS_AS(TimeGrid(0.0, std::nan(""), 3), InvalidArgument);
}

TEST_CASE("expm of zero, diagonal and nilpotent matrices") {
  CHECK(expm(ComplexMatrix::Zero(3, 3)).isApprox(ComplexMatrix::Identity(3, 3), 1e-15));

  ComplexMatrix d = ComplexMatrix::Zero(2, 2);
  d(0, 0) = Complex(0.3, 2.0);
  d(1, 1) = Complex(-1.5, 0.0);
  const ComplexMatrix e = expm(d);
  CHECK(std::abs(e(0, 0) - std::exp(d(0, 0))) < 1e-14);
  CHECK(std::abs(e(1, 1) - std::exp(d(1, 1))) < 1e-14);

  // N^2 = 0 so exp(N) = I + N exactly.
  ComplexMatrix nil = ComplexMatrix::Zero(2, 2);
  nil(0, 1) = 5.0;
  CHECK(rel_err(expm(nil), ComplexMatrix::Identity(2, 2) + nil) < 1e-14);
}

TEST_CASE("expm matches a long-double Taylor oracle on non-normal matrices") {
  std::mt19937_64 rng(11);
  for (double scale : {0.01, 0.3, 2.0, 6.0}) {
    for (int n : {2, 4}) {
      const ComplexMatrix a = random_matrix(rng, n, scale);
      CAPTURE(scale);
      CHECK(rel_err(expm(a), oracle::taylor_expm(a)) < 1e-12);
    }
  }
}

TEST_CASE("expm of an anti-Hermitian matrix is unitary") {
  std::mt19937_64 rng(3);
  const ComplexMatrix a = random_matrix(rng, 4, 1.0);
  const ComplexMatrix h = hermitian_part(a);
  const ComplexMatrix u = expm((-kI * 3.0 * h).eval());
  CHECK((u.adjoint() * u - ComplexMatrix::Identity(4, 4)).norm() < 1e-13);
}

TEST_CASE("herm_eig, hermitian_part and operator_norm") {
  std::mt19937_64 rng(5);
  const ComplexMatrix h = hermitian_part(random_matrix(rng, 3, 1.0));
  const auto eig = herm_eig(h, 1e-12);
  const ComplexMatrix back = eig.vectors * eig.values.asDiagonal() * eig.vectors.adjoint();
  CHECK(rel_err(back, h) < 1e-13);
  CHECK(eig.values(0) <= eig.values(1));
  CHECK(operator_norm(h) == doctest::Approx(eig.values.cwiseAbs().maxCoeff()).epsilon(1e-12));

  ComplexMatrix bad = h;
  bad(0, 1) += 1e-3;
  CHECK_THROWS_AS(herm_eig(bad, 1e-8), NotHermitian);
  CHECK(is_hermitian(h, 1e-14));
  CHECK_FALSE(is_hermitian(bad, 1e-8));
}

TEST_CASE("sqrtm_psd squares back and rejects negative spectra") {
  std::mt19937_64 rng(7);
  const ComplexMatrix b = random_matrix(rng, 3, 1.0);
  const ComplexMatrix psd = b * b.adjoint();
  const ComplexMatrix root = sqrtm_psd(psd);
  CHECK(rel_err(root * root, psd) < 1e-12);
  CHECK(is_hermitian(root, 1e-13));

  ComplexMatrix neg = ComplexMatrix::Identity(2, 2);
  neg(1, 1) = -0.5;
  CHECK_THROWS_AS(sqrtm_psd(neg), NotPositive);

  // Tiny negative eigenvalues inside the tolerance are clamped.
  ComplexMatrix edge = ComplexMatrix::Identity(2, 2);
  edge(1, 1) = -1e-12;
  CHECK(sqrtm_psd(edge)(1, 1) == Complex(0.0, 0.0));
}

TEST_CASE("sylvester_hermitian solves A X + X A = C") {
  std::mt19937_64 rng(9);
  const ComplexMatrix b = random_matrix(rng, 3, 1.0);
  const ComplexMatrix a = b * b.adjoint() + ComplexMatrix::Identity(3, 3);
  const ComplexMatrix c = hermitian_part(random_matrix(rng, 3, 1.0));
  const ComplexMatrix x = sylvester_hermitian(a, c);
  CHECK(rel_err(a * x + x * a, c) < 1e-12);
  CHECK(is_hermitian(x, 1e-13));

  RealVector lambda(2);
  lambda << 1.0, -1.0;
  CHECK_THROWS_AS(sylvester_diagonal(lambda, ComplexMatrix::Ones(2, 2)), SingularPair);
}

TEST_CASE("ordered_propagator of a constant generator is expm(t G)") {
  std::mt19937_64 rng(13);
  const ComplexMatrix g = random_matrix(rng, 2, 0.5);
  const TimeGrid grid(0.0, 2.0, 201);
  const auto u = ordered_propagator([&g](double) { return g; }, grid);
  const auto v = inverse_ordered_propagator([&g](double) { return g; }, grid);
  for (std::size_t k : {std::size_t{0}, std::size_t{57}, std::size_t{200}}) {
    const ComplexMatrix ref = oracle::taylor_expm((grid.time(k) * g).eval());
    CHECK(rel_err(u[k], ref) < 1e-12);
    CHECK(rel_err(u[k] * v[k], ComplexMatrix::Identity(2, 2)) < 1e-12);
  }
}

TEST_CASE("ordered_propagator converges at second order for a time-dependent generator") {
  // G(t) = -i (sigma_x + t sigma_z): consecutive values do not commute.
  const auto gen = [](double t) {
    ComplexMatrix h(2, 2);
    h << t, 1.0, 1.0, -t;
    return ComplexMatrix(-kI * h);
  };
  const ComplexMatrix ref = ordered_propagator(gen, TimeGrid(0.0, 2.0, 2), 20000).back();
  const double e1 = rel_err(ordered_propagator(gen, TimeGrid(0.0, 2.0, 101)).back(), ref);
  const double e2 = rel_err(ordered_propagator(gen, TimeGrid(0.0, 2.0, 201)).back(), ref);
  const double e3 = rel_err(ordered_propagator(gen, TimeGrid(0.0, 2.0, 101), 2).back(), ref);
  CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.05));
  CHECK(e3 == doctest::Approx(e2).epsilon(1e-6));
  CHECK_THROWS_AS(ordered_propagator(gen, TimeGrid(0.0, 1.0, 3), 0), InvalidArgument);
}

TEST_CASE("kron follows the system-first ordering") {
  ComplexMatrix a(2, 2), b(2, 2);
  a << 1, 2, 3, 4;
  b << 0, 1, 1, 0;
  const ComplexMatrix k = kron(a, b);
  CHECK(k(0, 1) == Complex(1.0));
  CHECK(k(1, 2) == Complex(2.0));
  CHECK(k(3, 2) == Complex(4.0));
}
