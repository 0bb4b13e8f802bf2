//
// Project     : sinkdiv
// Module      : sinkhorn
//

#include "sinkdiv/sinkhorn.hpp"

#include "sinkdiv/wasserstein1d.hpp"

#include <cmath>

namespace sinkdiv {

namespace {

// Elementwise marginal-over-kernel division. Entries with a zero numerator
// are zero by convention, which tolerates approximate kernel sums that dip
// nonpositive outside the marginal's support; a nonzero numerator over a
// nonpositive sum, and 0/0, are genuine failures.
Vector safe_div(const Vector& num, const Vector& den) {
  require(num.size() == den.size(), errc::length_mismatch, "division length mismatch");
  Vector out(num.size());
  for (Index i = 0; i < den.size(); ++i) {
    require(std::isfinite(den(i)), errc::nonpositive_denominator,
            "scaling update hit a non-finite denominator");
    if (num(i) == 0.0) {
      require(den(i) != 0.0, errc::nonpositive_denominator,
              "scaling update divided zero by zero");
      out(i) = 0.0;
    } else {
      require(den(i) > 0.0, errc::nonpositive_denominator,
              "scaling update hit a nonpositive denominator");
      out(i) = num(i) / den(i);
    }
  }
  return out;
}

double residual(const Vector& u, const Vector& qv, const Vector& f, const Vector& v,
                const Vector& qtu, const Vector& g) {
  const double ru = (u.cwiseProduct(qv) - f).cwiseAbs().maxCoeff();
  const double rv = (v.cwiseProduct(qtu) - g).cwiseAbs().maxCoeff();
  return std::max(ru, rv);
}

} // namespace

SinkhornState sinkhorn_scaling(const ProbabilityVector& f, const ProbabilityVector& g,
                               const ApplyFn& apply_q, const ApplyFn& apply_qt,
                               const SinkhornConfig& config) {
  const Index n = f.values().size();
  require(g.values().size() == n, errc::length_mismatch, "marginals differ in length");
  require(std::isfinite(config.eps_s) && config.eps_s > 0.0, errc::invalid_argument,
          "stopping tolerance must be positive");
  require(config.max_iter >= 1, errc::invalid_argument, "iteration cap must be at least 1");

  const auto checked = [n](Vector z) {
    require(z.size() == n, errc::length_mismatch, "kernel operator changed the length");
    return z;
  };

  // State 0: u uniform, v matched to g. The stopping criterion applies to
  // states 1, 2, ...; the initial state is never tested, so at least one
  // update pair always runs.
  Vector u = Vector::Constant(n, 1.0 / static_cast<double>(n));
  Vector qtu = checked(apply_qt(u));
  Vector v = safe_div(g.values(), qtu);

  long it = 0;
  while (it < config.max_iter) {
    const Vector qv = checked(apply_q(v));
    if (it >= 1) {
      const double res = residual(u, qv, f.values(), v, qtu, g.values());
      if (config.trace != nullptr) config.trace->emplace_back(it, res);
      if (res <= config.eps_s) return SinkhornState{std::move(u), std::move(v), it, res};
    }
    u = safe_div(f.values(), qv);
    qtu = checked(apply_qt(u));
    v = safe_div(g.values(), qtu);
    ++it;
  }
  const Vector qv = checked(apply_q(v));
  const double res = residual(u, qv, f.values(), v, qtu, g.values());
  if (config.trace != nullptr) config.trace->emplace_back(it, res);
  if (res <= config.eps_s) return SinkhornState{std::move(u), std::move(v), it, res};
  fail(errc::max_iter_exceeded, "scaling iteration did not reach the tolerance");
}

double sinkhorn_divergence(const SinkhornState& state, const ApplyFn& apply_qhat, double p) {
  require(std::isfinite(p) && p >= 1.0, errc::invalid_argument,
          "divergence exponent must satisfy p >= 1");
  const Vector qhv = apply_qhat(state.v);
  require(qhv.size() == state.u.size(), errc::length_mismatch,
          "kernel operator changed the length");
  double inner = state.u.dot(qhv);
  // The bilinear form is nonnegative in exact arithmetic; rounding may leave
  // a tiny negative value, which the root must not see.
  if (inner < 0.0) inner = 0.0;
  return std::pow(inner, 1.0 / p);
}

DivergenceResult dense_sinkhorn(const ProbabilityVector& f, const ProbabilityVector& g,
                                const Matrix& cost, const SinkhornConfig& config) {
  const Index n = f.values().size();
  require(cost.rows() == n && cost.cols() == n, errc::length_mismatch,
          "cost matrix does not match the marginals");
  require(std::isfinite(config.lambda) && config.lambda > 0.0, errc::invalid_argument,
          "regularization lambda must be positive");
  const Matrix q = (-config.lambda * cost).array().exp().matrix();
  const Matrix qhat = cost.cwiseProduct(q);
  const ApplyFn apply_q = [&q](const Vector& z) { return Vector(q * z); };
  const ApplyFn apply_qt = [&q](const Vector& z) { return Vector(q.transpose() * z); };
  const ApplyFn apply_qhat = [&qhat](const Vector& z) { return Vector(qhat * z); };
  SinkhornState state = sinkhorn_scaling(f, g, apply_q, apply_qt, config);
  const double value = sinkhorn_divergence(state, apply_qhat, config.p);
  return DivergenceResult{std::move(state), value};
}

DivergenceResult hierarchical_sinkhorn(const ProbabilityVector& f,
                                       const ProbabilityVector& g,
                                       const KernelFactorSet& factors,
                                       const SinkhornConfig& config) {
  require(factors.n == f.values().size(), errc::length_mismatch,
          "factor set does not match the marginals");
  const ApplyFn apply_q = [&factors](const Vector& z) { return factors.apply_q(z); };
  const ApplyFn apply_qt = [&factors](const Vector& z) { return factors.apply_qt(z); };
  const ApplyFn apply_qhat = [&factors](const Vector& z) { return factors.apply_qhat(z); };
  SinkhornState state = sinkhorn_scaling(f, g, apply_q, apply_qt, config);
  const double value = sinkhorn_divergence(state, apply_qhat, config.p);
  return DivergenceResult{std::move(state), value};
}

bool upper_bound_check(const ProbabilityVector& f, const ProbabilityVector& g,
                       const Grid1D& grid, const SinkhornConfig& config) {
  require(config.p == 2.0, errc::invalid_argument,
          "transport comparison is defined for p = 2");
  const Matrix cost = cost_matrix_1d(Cost1D::squared_distance(), grid, grid);
  const DivergenceResult result = dense_sinkhorn(f, g, cost, config);
  const double w = w2_1d(f, g, grid);
  return result.value >= w - 1e-9;
}

} // namespace sinkdiv
