#include "ptdilate/fitkit.hpp"

#include <cmath>
#include <limits>

#include "ptdilate/errors.hpp"
#include "ptdilate/ptmodel.hpp"

namespace ptdilate {

double fit_sse(const std::vector<Sample>& samples, double r) {
  const PTParams params(r);
  double sse = 0.0;
  for (const auto& s : samples) {
    const double d = analytic_p0(params, s.t) - s.p0;
    sse += d * d;
  }
  return sse;
}

namespace {

double golden_section(const std::vector<Sample>& samples, double a, double b, double tol) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = fit_sse(samples, c);
  double fd = fit_sse(samples, d);
  while (b - a > tol) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = fit_sse(samples, c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = fit_sse(samples, d);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

FitResult fit_r(const std::vector<Sample>& samples, const FitOptions& options) {
  if (samples.size() < 3) throw InvalidArgument("fit_r: need at least 3 samples");
  const double lo = options.lo, hi = options.hi;
  if (!(lo >= 0.0) || !(hi <= 2.0) || !(lo < hi)) {
    throw InvalidArgument("fit_r: r range must satisfy 0 <= lo < hi <= 2");
  }
  if (!(options.scan_step > 0.0) || !(options.tolerance > 0.0)) {
    throw InvalidArgument("fit_r: scan step and tolerance must be > 0");
  }
  for (const auto& s : samples) {
    if (!std::isfinite(s.t) || !std::isfinite(s.p0)) {
      throw InvalidArgument("fit_r: samples must be finite");
    }
  }

  const auto steps = static_cast<long>(std::ceil((hi - lo) / options.scan_step - 1e-9));
  double best_r = lo;
  double best = std::numeric_limits<double>::infinity();
  for (long i = 0; i <= steps; ++i) {
    const double r = std::min(hi, lo + static_cast<double>(i) * options.scan_step);
    const double v = fit_sse(samples, r);
    if (v < best) {
      best = v;
      best_r = r;
    }
  }
  const double a = std::max(lo, best_r - options.scan_step);
  const double b = std::min(hi, best_r + options.scan_step);
  double r_fit = golden_section(samples, a, b, options.tolerance);
  double sse = fit_sse(samples, r_fit);
  if (best < sse) {
    r_fit = best_r;
    sse = best;
  }

  FitResult out;
  out.r_exp = r_fit;
  out.sse = sse;
  out.n_samples = static_cast<int>(samples.size());
  const auto e = pt_eigenvalues(r_fit);
  out.e_plus = e.plus;
  out.e_minus = e.minus;

  const double h = 1e-4;
  double curvature;
  if (r_fit - h >= lo && r_fit + h <= hi) {
    curvature = (fit_sse(samples, r_fit + h) - 2.0 * sse + fit_sse(samples, r_fit - h)) / (h * h);
  } else if (r_fit - h < lo) {
    curvature = (sse - 2.0 * fit_sse(samples, r_fit + h) + fit_sse(samples, r_fit + 2.0 * h)) / (h * h);
  } else {
    curvature = (sse - 2.0 * fit_sse(samples, r_fit - h) + fit_sse(samples, r_fit - 2.0 * h)) / (h * h);
  }
  const double n = static_cast<double>(samples.size());
  if (curvature > 0.0 && std::isfinite(curvature)) {
    out.stderr_r = std::sqrt(2.0 * sse / (n - 2.0) / curvature);
  } else {
    out.degenerate_curvature = true;
    out.stderr_r = std::numeric_limits<double>::infinity();
  }
  return out;
}

std::vector<EigenRow> eigen_curve(const std::vector<double>& r_values,
                                  const std::vector<FitResult>& fits) {
  if (r_values.size() != fits.size()) {
    throw InvalidArgument("eigen_curve: need exactly one fit per r value");
  }
  std::vector<EigenRow> rows;
  rows.reserve(fits.size());
  for (std::size_t i = 0; i < fits.size(); ++i) {
    const auto e = pt_eigenvalues(fits[i].r_exp);
    rows.push_back({r_values[i], fits[i].r_exp, fits[i].stderr_r, e.plus, e.minus});
  }
  return rows;
}

}  // namespace ptdilate
