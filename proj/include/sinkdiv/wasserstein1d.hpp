#ifndef SINKDIV_WASSERSTEIN1D_HPP
#define SINKDIV_WASSERSTEIN1D_HPP
//
// Project     : sinkdiv
// Module      : wasserstein1d
// Description : grid cdf, quantile inverse, and the 1-D W2 quadrature
//

#include "sinkdiv/core.hpp"
#include "sinkdiv/types.hpp"

namespace sinkdiv {

// Nondecreasing prefix sums of a probability vector at the grid points.
struct Cdf {
  Vector values;
};

Cdf cdf(const ProbabilityVector& f);

// First-reach quantile: the first grid point where the cdf reaches t (binary
// search); flat runs resolve to their left edge, jumps to the jump point.
// t is clamped to the attained range.
double inverse_cdf(const Cdf& g, const Grid1D& grid, double t);

// W2(f,g)^2 ~= dx * sum_i |x_i - Ginv(F(x_i))|^2 f_i on a shared grid;
// returns the square root. The dx weight is part of the definition.
double w2_1d(const ProbabilityVector& f, const ProbabilityVector& g, const Grid1D& grid);

} // namespace sinkdiv

#endif
