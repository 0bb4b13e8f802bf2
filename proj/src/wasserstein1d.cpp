//
// Project     : sinkdiv
// Module      : wasserstein1d
//

#include "sinkdiv/wasserstein1d.hpp"

#include <algorithm>
#include <cmath>

namespace sinkdiv {

Cdf cdf(const ProbabilityVector& f) {
  const Vector& p = f.values();
  Vector values(p.size());
  double sum = 0.0;
  double carry = 0.0;
  double prev = 0.0;
  for (Index i = 0; i < p.size(); ++i) {
    const double y = p(i) - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
    // Clamp to keep the prefix sums monotone under rounding.
    prev = std::max(prev, sum);
    values(i) = prev;
  }
  return Cdf{std::move(values)};
}

double inverse_cdf(const Cdf& g, const Grid1D& grid, double t) {
  const Vector& G = g.values;
  require(G.size() == grid.size(), errc::length_mismatch, "cdf/grid size mismatch");
  // Quantile: the first grid point whose cumulative mass reaches t. Flat runs
  // of the cdf resolve to their left edge, jumps to the jump point.
  t = std::min(std::max(t, 0.0), G(G.size() - 1));
  const double* begin = G.data();
  const double* end = G.data() + G.size();
  const double* it = std::lower_bound(begin, end, t);
  if (it == end) --it;
  return grid.point(static_cast<Index>(it - begin));
}

double w2_1d(const ProbabilityVector& f, const ProbabilityVector& g, const Grid1D& grid) {
  require(f.values().size() == grid.size() && g.values().size() == grid.size(),
          errc::length_mismatch, "signal/grid size mismatch");
  const Cdf F = cdf(f);
  const Cdf G = cdf(g);
  const double top = G.values(G.values.size() - 1);
  double acc = 0.0;
  for (Index i = 0; i < grid.size(); ++i) {
    const double fi = f.values()(i);
    if (fi == 0.0) continue;
    const double t = std::min(F.values(i), top);
    const double diff = grid.point(i) - inverse_cdf(G, grid, t);
    acc += diff * diff * fi;
  }
  return std::sqrt(grid.spacing() * acc);
}

} // namespace sinkdiv
