#include "ptdilate/ptmodel.hpp"

#include <cmath>
#include <string>

namespace ptdilate {

PTParams::PTParams(double r_value) : r(r_value) {
  if (!std::isfinite(r_value) || r_value < 0.0) {
    throw InvalidArgument("PTParams: r must be finite and >= 0, got " + std::to_string(r_value));
  }
}

std::string_view to_string(PTRegime regime) {
  switch (regime) {
    case PTRegime::Hermitian: return "Hermitian";
    case PTRegime::Unbroken: return "Unbroken";
    case PTRegime::ExceptionalPoint: return "ExceptionalPoint";
    case PTRegime::Broken: return "Broken";
  }
  return "Unknown";
}

ComplexMatrix pt_hamiltonian(const PTParams& p) {
  ComplexMatrix h(2, 2);
  h << kI * p.r, 1.0, 1.0, -kI * p.r;
  return h;
}

EigenvaluePair pt_eigenvalues(double r) {
  // (1 - r)(1 + r) keeps full relative accuracy near r = 1.
  const Complex e = std::sqrt(Complex((1.0 - r) * (1.0 + r), 0.0));
  return {e, -e};
}

EigenvaluePair pt_eigenvalues(const PTParams& p) { return pt_eigenvalues(p.r); }

namespace {

// e^{-iHt}|0> = (cosh(st) + r sinh(st)/s, -i sinh(st)/s) with s^2 = r^2 - 1,
// returned as the two real amplitudes (a, b) of (a, -i b), rescaled by
// e^{-s|t|} when s is real.
struct Amplitudes {
  double a;
  double b;
};

Amplitudes amplitudes(double r, double t) {
  if (std::abs(r - 1.0) < kExceptionalWindow) {
    // H^2 = 0: e^{-iHt} = I - i t H.
    return {1.0 + r * t, t};
  }
  if (r < 1.0) {
    const double w = std::sqrt((1.0 - r) * (1.0 + r));
    const double c = std::cos(w * t);
    const double sh = std::sin(w * t) / w;
    return {c + r * sh, sh};
  }
  const double s = std::sqrt((r - 1.0) * (r + 1.0));
  const double at = std::abs(t);
  const double decay = std::exp(-2.0 * s * at);
  const double c = 0.5 * (1.0 + decay);
  const double sh = std::copysign(-std::expm1(-2.0 * s * at) / (2.0 * s), t);
  return {c + r * sh, sh};
}

}  // namespace

Eigen::Vector2cd analytic_state(const PTParams& p, double t) {
  const auto [a, b] = amplitudes(p.r, t);
  return Eigen::Vector2cd(Complex(a, 0.0), Complex(0.0, -b));
}

double analytic_p0(const PTParams& p, double t) {
  const auto [a, b] = amplitudes(p.r, t);
  const double a2 = a * a;
  return a2 / (a2 + b * b);
}

PTRegime classify(const PTParams& p) {
  if (p.r == 0.0) return PTRegime::Hermitian;
  if (p.r < 1.0) return PTRegime::Unbroken;
  if (p.r == 1.0) return PTRegime::ExceptionalPoint;
  return PTRegime::Broken;
}

}  // namespace ptdilate
