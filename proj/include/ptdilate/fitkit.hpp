#pragma once

// One-parameter least-squares fit of P0(t) samples to the closed-form PT
// evolution, and the eigenvalue bifurcation table derived from the fits.

#include <complex>
#include <vector>

namespace ptdilate {

struct Sample {
  double t;
  double p0;
};

struct FitResult {
  double r_exp = 0.0;
  double stderr_r = 0.0;  // infinite when the curvature is degenerate
  double sse = 0.0;
  int n_samples = 0;
  std::complex<double> e_plus;
  std::complex<double> e_minus;
  bool degenerate_curvature = false;
};

struct FitOptions {
  double lo = 0.0;
  double hi = 2.0;
  double scan_step = 1e-3;
  double tolerance = 1e-6;
};

/// Sum of squared residuals of the model at r.
double fit_sse(const std::vector<Sample>& samples, double r);

/// Grid scan over [lo, hi] followed by golden-section refinement. The standard
/// error is sqrt(2 SSE / (n - 2) / SSE'') with SSE'' from finite differences.
/// Throws InvalidArgument for fewer than 3 samples or a range outside [0, 2].
FitResult fit_r(const std::vector<Sample>& samples, const FitOptions& options = {});

struct EigenRow {
  double r_nominal;
  double r_exp;
  double stderr_r;
  std::complex<double> e_plus;
  std::complex<double> e_minus;
};

/// One row per (nominal r, fit). Throws InvalidArgument on length mismatch.
std::vector<EigenRow> eigen_curve(const std::vector<double>& r_values,
                                  const std::vector<FitResult>& fits);

}  // namespace ptdilate
