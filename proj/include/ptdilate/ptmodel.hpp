#pragma once

// The two-level PT-symmetric family H(r) = [[i r, 1], [1, -i r]] with unit
// coupling, its spectrum, and the closed-form evolution from |0>.

#include <string_view>

#include <Eigen/Dense>

#include "ptdilate/numkit.hpp"

namespace ptdilate {

/// Non-Hermiticity strength r >= 0 (negative r is rejected).
struct PTParams {
  double r;

  explicit PTParams(double r_value);
};

enum class PTRegime { Hermitian, Unbroken, ExceptionalPoint, Broken };

std::string_view to_string(PTRegime regime);

/// |r - 1| below this switches the closed forms to their r = 1 limit.
inline constexpr double kExceptionalWindow = 1e-9;

ComplexMatrix pt_hamiltonian(const PTParams& p);

struct EigenvaluePair {
  Complex plus;
  Complex minus;
};

/// E = +-sqrt(1 - r^2), principal branch (E_plus = i sqrt(r^2 - 1) for r > 1).
EigenvaluePair pt_eigenvalues(const PTParams& p);
EigenvaluePair pt_eigenvalues(double r);

/// Unnormalized e^{-i H t}|0>. For r > 1 both components are divided by
/// e^{s|t|}, s = sqrt(r^2 - 1), so nothing overflows; normalized quantities
/// are unaffected. Negative t is allowed.
Eigen::Vector2cd analytic_state(const PTParams& p, double t);

/// Population of |0> in the normalized evolved state.
double analytic_p0(const PTParams& p, double t);

PTRegime classify(const PTParams& p);

}  // namespace ptdilate
