#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "ptdilate/dilation.hpp"
#include "ptdilate/fitkit.hpp"
#include "ptdilate/ptmodel.hpp"
#include "ptdilate/readout.hpp"
#include "ptdilate/simulator.hpp"

using namespace ptdilate;

namespace {

std::vector<Sample> clean_samples(double r) {
  std::vector<Sample> s;
  for (int i = 0; i <= 80; ++i) s.push_back({0.1 * i, oracle::closed_p0(r, 0.1 * i)});
  return s;
}

// Shot-noise samples through the dilated simulation and the readout chain.
std::vector<Sample> noisy_samples(double r, std::uint64_t seed) {
  const auto hs = constant_hamiltonian(pt_hamiltonian(PTParams(r)));
  const auto dil = dilate(hs, DilationConfig{TimeGrid(0.0, 8.0, 8001)});
  ComplexVector psi0(2);
  psi0 << 1.0, 0.0;
  const auto traj = evolve_dilated(dil.hsa, prepare_initial(psi0, std::sqrt(dil.m0 - 1.0)));
  const PLRates rates = default_pl_rates();
  std::vector<Sample> out;
  for (std::size_t k = 0; k < traj.states.size(); k += 100) {
    const auto counts = simulate_counts(level_populations(traj.states[k]), rates, 500000, seed, k);
    // A branch that reads back as empty carries no P0 information; drop it.
    try {
      out.push_back({traj.grid.time(k), p0_from_populations(populations_from_counts(counts, rates).p)});
    } catch (const ZeroSelectionBranch&) {
    }
  }
  return out;
}

}  // namespace

TEST_CASE("noise-free recovery") {
  const FitResult f = fit_r(clean_samples(0.616));
  CHECK(std::abs(f.r_exp - 0.616) <= 1e-3);
  CHECK(f.n_samples == 81);
  CHECK(f.sse <= 1e-12);

  const FitResult zero = fit_r(clean_samples(0.0));
  CHECK(zero.r_exp <= 1e-3);

  for (int i = 0; i <= 15; ++i) {
    const double r = 0.1 * i;
    CAPTURE(r);
    const FitResult fr = fit_r(clean_samples(r));
    CHECK(std::abs(fr.r_exp - r) <= 1e-3);
    const auto e = pt_eigenvalues(fr.r_exp);
    CHECK(fr.e_plus == e.plus);
    CHECK(fr.e_minus == e.minus);
  }
}

TEST_CASE("the fitted r minimizes SSE over the scan") {
  const auto samples = noisy_samples(0.6, 5);
  const FitResult f = fit_r(samples);
  for (double r = 0.0; r <= 2.0; r += 1e-3) REQUIRE(f.sse <= fit_sse(samples, r) + 1e-15);
  CHECK(std::isfinite(f.stderr_r));
  CHECK_FALSE(f.degenerate_curvature);
}

TEST_CASE("data generated at -r fits to r once time is reversed") {
  // P0(-r, t) = P0(r, -t), so the sign of r is a time-reversal, not a symmetry.
  for (double r : {0.4, 0.9, 1.3}) {
    std::vector<Sample> reversed;
    for (int i = 0; i <= 80; ++i) reversed.push_back({-0.1 * i, oracle::brute_p0(-r, 0.1 * i)});
    const FitResult a = fit_r(reversed);
    const FitResult b = fit_r(clean_samples(r));
    CAPTURE(r);
    CHECK(std::abs(a.r_exp - b.r_exp) <= 1e-6);
  }
}

TEST_CASE("eigen curve") {
  std::vector<FitResult> fits(3);
  fits[0].r_exp = 0.8;
  fits[1].r_exp = 1.0;
  fits[2].r_exp = 1.509;
  const auto rows = eigen_curve({0.8, 1.0, 1.5}, fits);
  CHECK(rows[0].e_plus.real() == doctest::Approx(0.6));
  CHECK(rows[0].e_plus.imag() == 0.0);
  CHECK(rows[0].e_minus.real() == doctest::Approx(-0.6));
  CHECK(std::abs(rows[1].e_plus) == 0.0);
  CHECK(rows[2].e_plus.real() == 0.0);
  CHECK(rows[2].e_plus.imag() == doctest::Approx(std::sqrt(1.509 * 1.509 - 1.0)).epsilon(1e-14));
  CHECK(rows[2].e_minus.imag() == doctest::Approx(-1.13008008565765).epsilon(1e-12));
  CHECK(rows[2].r_nominal == 1.5);
  CHECK_THROWS_AS(eigen_curve({0.8}, fits), InvalidArgument);
}

TEST_CASE("degenerate curvature and argument checks") {
  std::vector<Sample> flat{{0.0, 1.0}, {0.0, 1.0}, {0.0, 1.0}, {0.0, 1.0}};
  const FitResult f = fit_r(flat);
  CHECK(f.degenerate_curvature);
  CHECK(std::isinf(f.stderr_r));

  CHECK_THROWS_AS(fit_r({{0.0, 1.0}, {1.0, 0.5}}), InvalidArgument);
  CHECK_THROWS_AS(fit_r(clean_samples(0.5), FitOptions{0.0, 2.5}), InvalidArgument);
  CHECK_THROWS_AS(fit_r(clean_samples(0.5), FitOptions{1.0, 0.5}), InvalidArgument);
  auto bad = clean_samples(0.5);
  bad[3].p0 = NAN;
  CHECK_THROWS_AS(fit_r(bad), InvalidArgument);
}

TEST_CASE("fit range restricts the answer") {
  const FitResult f = fit_r(clean_samples(0.6), FitOptions{0.7, 1.2});
  const auto samples = clean_samples(0.6);
  CHECK(f.r_exp >= 0.7);
  CHECK(f.r_exp <= 1.2);
  for (double r = 0.7; r <= 1.2; r += 1e-3) REQUIRE(f.sse <= fit_sse(samples, r) + 1e-15);
}

TEST_CASE("noisy exceptional-point data") {
  const FitResult f = fit_r(noisy_samples(1.0, 42));
  MESSAGE("r_exp " << f.r_exp << " +- " << f.stderr_r);
  CHECK(std::abs(f.r_exp - 1.0) <= 3.0 * f.stderr_r);
  CHECK(f.stderr_r >= 0.010 / 5);
  CHECK(f.stderr_r <= 0.010 * 5);
}
