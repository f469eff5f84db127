#include "ptdilate/dilation.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "ptdilate/pauli.hpp"

namespace ptdilate {

HamiltonianFn constant_hamiltonian(ComplexMatrix h) {
  return [h = std::move(h)](double) { return h; };
}

void DilationConfig::validate() const {
  if (!(margin > 0.0) || !std::isfinite(margin)) {
    throw InvalidArgument("DilationConfig: margin must be > 0");
  }
  if (substeps < 1) throw InvalidArgument("DilationConfig: substeps must be >= 1");
}

Eigen::Vector2cd ancilla_minus() {
  const double s = 1.0 / std::sqrt(2.0);
  return Eigen::Vector2cd(s, -kI * s);
}

Eigen::Vector2cd ancilla_plus() {
  const double s = 1.0 / std::sqrt(2.0);
  return Eigen::Vector2cd(-kI * s, s);
}

namespace {

Generator schrodinger_generator(const HamiltonianFn& hs) {
  return [&hs](double t) -> ComplexMatrix { return -kI * hs(t); };
}

double max_abs(const ComplexMatrix& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

InitialMetric choose_initial_m(const HamiltonianFn& hs, const DilationConfig& cfg) {
  cfg.validate();
  const OperatorSeries eps = ordered_propagator(schrodinger_generator(hs), cfg.grid, cfg.substeps);
  double mu_prime = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < eps.size(); ++k) {
    Eigen::JacobiSVD<ComplexMatrix> svd(eps[k]);
    const auto& sv = svd.singularValues();
    const double smax = sv(0);
    const double smin = sv(sv.size() - 1);
    if (!(smin > 0.0) || !(smax / smin <= 1e14)) {
      throw SingularPropagator("condition number of the propagator exceeds 1e14 at t = " +
                               std::to_string(cfg.grid.time(k)));
    }
    // smallest eigenvalue of [eps^-1]^dag eps^-1 is 1 / smax^2
    mu_prime = std::min(mu_prime, 1.0 / (smax * smax));
  }
  return {(1.0 + cfg.margin) / mu_prime, mu_prime};
}

MetricSeries m_series(const HamiltonianFn& hs, double m0, const DilationConfig& cfg) {
  cfg.validate();
  if (!(m0 > 1.0) || !std::isfinite(m0)) throw InvalidArgument("m_series: m0 must exceed 1");
  const OperatorSeries inv =
      inverse_ordered_propagator(schrodinger_generator(hs), cfg.grid, cfg.substeps);

  MetricSeries out{{cfg.grid, {}}, {}};
  out.dense.values.reserve(inv.size());
  out.frames.reserve(inv.size());
  for (std::size_t k = 0; k < inv.size(); ++k) {
    const ComplexMatrix& x = inv[k];
    // M = m0 X^dag X = W (m0 S^2) W^dag from X = U S W^dag. The SVD resolves the
    // small singular values of X far better than an eigensolve of M would.
    Eigen::JacobiSVD<ComplexMatrix> svd(x, Eigen::ComputeFullV);
    const Eigen::Index n = x.rows();
    MetricFrame frame{RealVector(n), ComplexMatrix(n, n)};
    for (Eigen::Index i = 0; i < n; ++i) {
      const Eigen::Index src = n - 1 - i;  // ascending order
      const double s = svd.singularValues()(src);
      frame.values(i) = m0 * s * s;
      frame.vectors.col(i) = svd.matrixV().col(src);
    }
    if (!(frame.values(0) - 1.0 > 0.0)) {
      throw PositivityLost("smallest eigenvalue of M - I is " +
                           std::to_string(frame.values(0) - 1.0) + " at t = " +
                           std::to_string(cfg.grid.time(k)));
    }
    out.dense.values.push_back(hermitian_part((m0 * (x.adjoint() * x)).eval()));
    out.frames.push_back(std::move(frame));
  }
  return out;
}

EtaSeries eta_series(const HamiltonianFn& hs, const MetricSeries& metric) {
  const TimeGrid& grid = metric.dense.grid;
  EtaSeries out{{grid, {}}, {grid, {}}, {}};
  const std::size_t n = metric.frames.size();
  out.eta.values.reserve(n);
  out.deta.values.reserve(n);
  out.deta_frame.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    const auto& [d, v] = metric.frames[k];
    const RealVector l = (d.array() - 1.0).sqrt().matrix();
    const ComplexMatrix hv = v.adjoint() * hs(grid.time(k)) * v;
    // dM/dt in the eigenbasis: -i (Hv^dag D - D Hv)
    const ComplexMatrix dm = -kI * (hv.adjoint() * d.asDiagonal() - d.asDiagonal() * hv);
    ComplexMatrix e = hermitian_part(sylvester_diagonal(l, dm));
    out.eta.values.push_back(hermitian_part((v * l.asDiagonal() * v.adjoint()).eval()));
    out.deta.values.push_back(hermitian_part((v * e * v.adjoint()).eval()));
    out.deta_frame.push_back(std::move(e));
  }
  return out;
}

LambdaGamma lambda_gamma(const HamiltonianFn& hs, const MetricSeries& metric,
                         const EtaSeries& eta) {
  const TimeGrid& grid = metric.dense.grid;
  LambdaGamma out{{grid, {}}, {grid, {}}, {}};
  const std::size_t n = metric.frames.size();
  out.lambda.values.reserve(n);
  out.gamma.values.reserve(n);
  out.presym_residual.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    const auto& [d, v] = metric.frames[k];
    const RealVector l = (d.array() - 1.0).sqrt().matrix();
    const RealVector dinv = d.cwiseInverse();
    const ComplexMatrix hv = v.adjoint() * hs(grid.time(k)) * v;
    const ComplexMatrix& e = eta.deta_frame[k];

    // eta, M^-1 are diagonal here, so the products below are entrywise scalings.
    const ComplexMatrix lam =
        (hv + (kI * e + l.asDiagonal() * hv) * l.asDiagonal()) * dinv.asDiagonal();
    const ComplexMatrix gam =
        kI * (hv * l.asDiagonal() - l.asDiagonal() * hv - kI * e) * dinv.asDiagonal();

    const double scale = std::max({max_abs(lam), max_abs(gam), std::numeric_limits<double>::min()});
    out.presym_residual.push_back(
        std::max(hermiticity_residual(lam), hermiticity_residual(gam)) / scale);

    out.lambda.values.push_back(
        hermitian_part((v * hermitian_part(lam) * v.adjoint()).eval()));
    out.gamma.values.push_back(hermitian_part((v * hermitian_part(gam) * v.adjoint()).eval()));
  }
  return out;
}

OperatorSeries dilated_hamiltonian(const OperatorSeries& lambda, const OperatorSeries& gamma) {
  if (lambda.size() != gamma.size()) {
    throw InvalidArgument("dilated_hamiltonian: series length mismatch");
  }
  OperatorSeries out{lambda.grid, {}};
  out.values.reserve(lambda.size());
  const ComplexMatrix& id2 = sigma(Pauli::I);
  const ComplexMatrix& z = sigma(Pauli::Z);
  for (std::size_t k = 0; k < lambda.size(); ++k) {
    out.values.push_back(kron(lambda[k], id2) + kron(gamma[k], z));
  }
  return out;
}

DilationResult dilate(const HamiltonianFn& hs, const DilationConfig& cfg,
                      std::optional<double> m0_override) {
  cfg.validate();
  const InitialMetric init = choose_initial_m(hs, cfg);
  double m0 = init.m0;
  if (m0_override) {
    if (!(*m0_override > 1.0)) throw InvalidArgument("m0 override must exceed 1");
    m0 = *m0_override;
  }
  MetricSeries metric = m_series(hs, m0, cfg);
  EtaSeries eta = eta_series(hs, metric);
  LambdaGamma lg = lambda_gamma(hs, metric, eta);
  OperatorSeries hsa = dilated_hamiltonian(lg.lambda, lg.gamma);
  return {m0, init.mu_prime, std::move(metric), std::move(eta), std::move(lg), std::move(hsa)};
}

namespace {

// Block <a| H |b> of a system (x) ancilla operator for ancilla vectors a, b.
ComplexMatrix ancilla_block(const ComplexMatrix& h, const Eigen::Vector2cd& a,
                            const Eigen::Vector2cd& b) {
  const Eigen::Index n = h.rows() / 2;
  ComplexMatrix out = ComplexMatrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      Complex acc = 0.0;
      for (int p = 0; p < 2; ++p) {
        for (int q = 0; q < 2; ++q) {
          acc += std::conj(a(p)) * h(2 * i + p, 2 * j + q) * b(q);
        }
      }
      out(i, j) = acc;
    }
  }
  return out;
}

}  // namespace

DiagnosticsReport verify_dilation(const DilationResult& result, const HamiltonianFn& hs) {
  DiagnosticsReport report;
  report.m0 = result.m0;
  report.min_eig_m_minus_i = std::numeric_limits<double>::infinity();
  const TimeGrid& grid = result.hsa.grid;
  const std::size_t n = result.hsa.size();
  const double dt = grid.dt();
  const Eigen::Vector2cd plus = ancilla_plus();
  const Eigen::Vector2cd minus = ancilla_minus();

  for (std::size_t k = 0; k < n; ++k) {
    const ComplexMatrix& h = result.hsa[k];
    const double hnorm = std::max(operator_norm(h), std::numeric_limits<double>::min());
    report.hermiticity = std::max(report.hermiticity, hermiticity_residual(h) / hnorm);
    report.presym_hermiticity =
        std::max(report.presym_hermiticity, result.lg.presym_residual[k]);
    report.min_eig_m_minus_i =
        std::min(report.min_eig_m_minus_i, result.metric.frames[k].values.minCoeff() - 1.0);

    const ComplexMatrix& m = result.metric.dense[k];
    const ComplexMatrix& eta = result.eta.eta[k];
    const double mnorm = operator_norm(m);
    report.eta_m_commutator =
        std::max(report.eta_m_commutator, operator_norm((eta * m - m * eta).eval()) / mnorm);

    const ComplexMatrix hpp = ancilla_block(h, plus, plus);
    const ComplexMatrix hpm = ancilla_block(h, plus, minus);
    const ComplexMatrix hmp = ancilla_block(h, minus, plus);
    const ComplexMatrix hmm = ancilla_block(h, minus, minus);
    report.block_antisymmetry =
        std::max(report.block_antisymmetry, operator_norm((hmp + hpm).eval()) / hnorm);

    const ComplexMatrix hsk = hs(grid.time(k));
    const ComplexMatrix& deta = result.eta.deta[k];
    const double scale = (1.0 + operator_norm(eta)) * (1.0 + operator_norm(hsk));
    const double first = operator_norm((hmm + hmp * eta - hsk).eval());
    const double second = operator_norm((hpm + hpp * eta - kI * deta - eta * hsk).eval());
    report.defining_relations =
        std::max(report.defining_relations, std::max(first, second) / scale);

    // Fourth-order central difference; the second-order stencil alone leaves
    // ~1e-6 ||M|| of truncation error when M grows like e^{2 s t}.
    if (k >= 2 && k + 2 < n) {
      auto sq = [&](std::size_t j) -> ComplexMatrix { return result.eta.eta[j] * result.eta.eta[j]; };
      const ComplexMatrix d_eta2 = (sq(k - 2) - 8.0 * sq(k - 1) + 8.0 * sq(k + 1) - sq(k + 2)) / (12.0 * dt);
      const ComplexMatrix eta2_plus_i = eta * eta + ComplexMatrix::Identity(m.rows(), m.cols());
      const ComplexMatrix residual =
          kI * d_eta2 - hsk.adjoint() * eta2_plus_i + eta2_plus_i * hsk;
      report.metric_equation = std::max(report.metric_equation, operator_norm(residual) / mnorm);
    }
  }
  return report;
}

}  // namespace ptdilate
