#ifndef SINKDIV_KERNELS_HPP
#define SINKDIV_KERNELS_HPP
//
// Project     : sinkdiv
// Module      : kernels
// Description : 1-D transport costs and regularized kernels kappa, kappa-hat
//

#include "sinkdiv/core.hpp"
#include "sinkdiv/types.hpp"

namespace sinkdiv {

enum class CostKind {
  squared_distance, // c(x,y) = (x-y)^2
  power_distance,   // c(x,y) = |x-y|^p, p >= 1
};

class Cost1D {
public:
  static Cost1D squared_distance();
  static Cost1D power_distance(double p);

  CostKind kind() const noexcept { return kind_; }
  double p() const noexcept { return p_; }
  double eval(double x, double y) const;

private:
  Cost1D(CostKind kind, double p) : kind_(kind), p_(p) {}

  CostKind kind_;
  double p_;
};

// Constants of the asymptotic-smoothness bound
// |d^m/dx^m kernel(x,y)| <= c0 * m! * alpha^m * m^beta * |x-y|^(-m-s).
struct SmoothnessParams {
  double c0;
  double alpha;
  double beta;
  double s;
};

// Known only for the squared-distance cost: (c0, alpha, beta, s) = (1, 2, 0, 0),
// valid for both kappa and kappa-hat. Other exponents throw unknown_smoothness.
SmoothnessParams default_smoothness(const Cost1D& cost);

enum class KernelKind {
  kappa,     // exp(-lambda c(x,y))
  kappa_hat, // c(x,y) exp(-lambda c(x,y))
};

class RegularizedKernel {
public:
  RegularizedKernel(Cost1D cost, double lambda, KernelKind kind);

  const Cost1D& cost() const noexcept { return cost_; }
  double lambda() const noexcept { return lambda_; }
  KernelKind kind() const noexcept { return kind_; }

  // Underflow to zero at large distances is silent; downstream scaling
  // detects vanished denominators instead.
  double eval(double x, double y) const;

private:
  Cost1D cost_;
  double lambda_;
  KernelKind kind_;
};

// Dense evaluation A(i,j) = kernel(x_i, y_j); test oracle and dense-leaf fill.
Matrix kernel_matrix(const RegularizedKernel& kernel, const Grid1D& grid_x,
                     const Grid1D& grid_y);

// Dense cost matrix C(i,j) = cost(x_i, y_j) for one axis.
Matrix cost_matrix_1d(const Cost1D& cost, const Grid1D& grid_x, const Grid1D& grid_y);

} // namespace sinkdiv

#endif
