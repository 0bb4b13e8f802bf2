//
// Project     : sinkdiv
// Module      : kernels
//

#include "sinkdiv/kernels.hpp"

#include <cmath>

namespace sinkdiv {

Cost1D Cost1D::squared_distance() { return Cost1D(CostKind::squared_distance, 2.0); }

Cost1D Cost1D::power_distance(double p) {
  require(std::isfinite(p) && p >= 1.0, errc::invalid_argument,
          "cost exponent must satisfy p >= 1");
  if (p == 2.0) return squared_distance();
  return Cost1D(CostKind::power_distance, p);
}

double Cost1D::eval(double x, double y) const {
  const double r = std::abs(x - y);
  if (kind_ == CostKind::squared_distance) return r * r;
  return std::pow(r, p_);
}

SmoothnessParams default_smoothness(const Cost1D& cost) {
  // Derivative bound |d^m/dx^m exp(-lambda |x-y|^2)|, rewritten through Hermite
  // polynomials, gives c0 (2 lambda^{1/2})^m m!^{1/2} growth; normalizing by the
  // substitution used in the rank rule leaves the asymptotically smooth profile
  // c0 = 1, alpha = 2 with no algebraic correction (beta = s = 0).
  require(cost.kind() == CostKind::squared_distance, errc::unknown_smoothness,
          "no smoothness constants for this cost");
  return SmoothnessParams{1.0, 2.0, 0.0, 0.0};
}

RegularizedKernel::RegularizedKernel(Cost1D cost, double lambda, KernelKind kind)
    : cost_(cost), lambda_(lambda), kind_(kind) {
  require(std::isfinite(lambda) && lambda > 0.0, errc::invalid_argument,
          "regularization lambda must be positive");
}

double RegularizedKernel::eval(double x, double y) const {
  const double c = cost_.eval(x, y);
  const double q = std::exp(-lambda_ * c);
  return kind_ == KernelKind::kappa ? q : c * q;
}

Matrix kernel_matrix(const RegularizedKernel& kernel, const Grid1D& grid_x,
                     const Grid1D& grid_y) {
  Matrix out(grid_x.size(), grid_y.size());
  for (Index j = 0; j < grid_y.size(); ++j) {
    const double y = grid_y.point(j);
    for (Index i = 0; i < grid_x.size(); ++i) out(i, j) = kernel.eval(grid_x.point(i), y);
  }
  return out;
}

Matrix cost_matrix_1d(const Cost1D& cost, const Grid1D& grid_x, const Grid1D& grid_y) {
  Matrix out(grid_x.size(), grid_y.size());
  for (Index j = 0; j < grid_y.size(); ++j) {
    const double y = grid_y.point(j);
    for (Index i = 0; i < grid_x.size(); ++i) out(i, j) = cost.eval(grid_x.point(i), y);
  }
  return out;
}

} // namespace sinkdiv
