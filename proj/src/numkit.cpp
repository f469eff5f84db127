#include "ptdilate/numkit.hpp"

#include <unsupported/Eigen/KroneckerProduct>

namespace ptdilate {

TimeGrid::TimeGrid(double t0, double t1, std::size_t n_nodes) : t0_(t0), t1_(t1), n_(n_nodes) {
  if (!std::isfinite(t0) || !std::isfinite(t1) || !(t1 > t0)) {
    throw InvalidArgument("TimeGrid: require finite t1 > t0");
  }
  if (n_nodes < 2) throw InvalidArgument("TimeGrid: require at least 2 nodes");
}

TimeGrid TimeGrid::refined(std::size_t factor) const {
  if (factor < 1) throw InvalidArgument("TimeGrid::refined: factor must be >= 1");
  return TimeGrid(t0_, t1_, (n_ - 1) * factor + 1);
}

namespace {

void check_substeps(int substeps) {
  if (substeps < 1) throw InvalidArgument("substeps must be >= 1");
}

// Calls `apply(step_generator_times_h)` for every substep of interval k.
template <typename Apply>
void for_each_step(const Generator& generator, const TimeGrid& grid, std::size_t k, int substeps,
                   Apply&& apply) {
  const double t = grid.time(k);
  const double h = (grid.time(k + 1) - t) / substeps;
  for (int j = 0; j < substeps; ++j) {
    const double mid = t + (j + 0.5) * h;
    apply(h, generator(mid));
  }
}

}  // namespace

OperatorSeries ordered_propagator(const Generator& generator, const TimeGrid& grid,
                                  int substeps) {
  check_substeps(substeps);
  const auto dim = generator(grid.t0()).rows();
  OperatorSeries out{grid, {}};
  out.values.reserve(grid.size());
  ComplexMatrix u = ComplexMatrix::Identity(dim, dim);
  out.values.push_back(u);
  for (std::size_t k = 0; k + 1 < grid.size(); ++k) {
    for_each_step(generator, grid, k, substeps,
                  [&](double h, const ComplexMatrix& g) { u = (expm(h * g) * u).eval(); });
    out.values.push_back(u);
  }
  return out;
}

OperatorSeries inverse_ordered_propagator(const Generator& generator, const TimeGrid& grid,
                                          int substeps) {
  check_substeps(substeps);
  const auto dim = generator(grid.t0()).rows();
  OperatorSeries out{grid, {}};
  out.values.reserve(grid.size());
  ComplexMatrix v = ComplexMatrix::Identity(dim, dim);
  out.values.push_back(v);
  for (std::size_t k = 0; k + 1 < grid.size(); ++k) {
    for_each_step(generator, grid, k, substeps,
                  [&](double h, const ComplexMatrix& g) { v = (v * expm(-h * g)).eval(); });
    out.values.push_back(v);
  }
  return out;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  return Eigen::kroneckerProduct(a, b).eval();
}

}  // namespace ptdilate
