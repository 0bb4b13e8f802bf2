#ifndef SINKDIV_SINKHORN_HPP
#define SINKDIV_SINKHORN_HPP
//
// Project     : sinkdiv
// Module      : sinkhorn
// Description : scaling iteration, divergence, dense oracle, W2 domination check
//

#include "sinkdiv/core.hpp"
#include "sinkdiv/kron.hpp"
#include "sinkdiv/types.hpp"

#include <functional>
#include <utility>
#include <vector>

namespace sinkdiv {

struct SinkhornConfig {
  double lambda = 50.0;
  double p = 2.0;
  double eps_s = 0.01;
  long max_iter = 10000;
  // Optional per-iteration (iteration, residual) trace of every checked state.
  std::vector<std::pair<long, double>>* trace = nullptr;
};

struct SinkhornState {
  Vector u;
  Vector v;
  long iterations = 0;
  double residual = 0.0;
};

using ApplyFn = std::function<Vector(const Vector&)>;

// Alternating scaling u = f / (Q v), v = g / (Q^T u) from u0 = 1/n,
// v0 = g / (Q^T u0). The stopping rule
//   max(||u.(Qv) - f||_inf, ||v.(Q^T u) - g||_inf) <= eps_s
// is evaluated for iterates i = 1, 2, ...; the initial state is not checked,
// so at least one update pair always runs. Zero marginal entries give zero
// scaling entries (0/x = 0); any denominator entry <= 0 or nonfinite throws
// nonpositive_denominator; exhausting max_iter throws max_iter_exceeded.
SinkhornState sinkhorn_scaling(const ProbabilityVector& f, const ProbabilityVector& g,
                               const ApplyFn& apply_q, const ApplyFn& apply_qt,
                               const SinkhornConfig& config);

// S = (u^T (Qhat v))^(1/p), the inner product clamped at 0 before the root.
double sinkhorn_divergence(const SinkhornState& state, const ApplyFn& apply_qhat,
                           double p);

struct DivergenceResult {
  SinkhornState state;
  double value = 0.0;
};

// Reference path on the dense cost matrix: Q = exp[-lambda C], Qhat = C .* Q.
DivergenceResult dense_sinkhorn(const ProbabilityVector& f, const ProbabilityVector& g,
                                const Matrix& cost, const SinkhornConfig& config);

// Fast path on prebuilt hierarchical kernel factors.
DivergenceResult hierarchical_sinkhorn(const ProbabilityVector& f,
                                       const ProbabilityVector& g,
                                       const KernelFactorSet& factors,
                                       const SinkhornConfig& config);

// Verifies S_{p,lambda}(f,g) >= W2(f,g) - 1e-9 with both sides computed by
// this library (dense Sinkhorn path; 1-D, p = 2).
bool upper_bound_check(const ProbabilityVector& f, const ProbabilityVector& g,
                       const Grid1D& grid, const SinkhornConfig& config);

} // namespace sinkdiv

#endif
