//
// Project     : sinkdiv
// Module      : kron
//

#include "sinkdiv/kron.hpp"

#include <cmath>

namespace sinkdiv {

Factor::Factor(Matrix dense) : dense_(std::move(dense)) {
  require(dense_.rows() == dense_.cols() && dense_.rows() > 0, errc::invalid_argument,
          "factor must be square and nonempty");
  size_ = dense_.rows();
}

Factor::Factor(std::shared_ptr<const HMatrix> h) : h_(std::move(h)) {
  require(h_ != nullptr, errc::invalid_argument, "factor is null");
  size_ = h_->rows();
}

Vector Factor::apply(const Vector& z, bool transpose) const {
  if (is_hierarchical()) {
    return transpose ? h_->matvec_transpose(z) : h_->matvec(z);
  }
  require(z.size() == size_, errc::length_mismatch, "factor input length mismatch");
  return transpose ? Vector(dense_.transpose() * z) : Vector(dense_ * z);
}

Index kron_size(const FactorList& factors) {
  require(!factors.empty(), errc::invalid_argument, "factor list is empty");
  Index size = 1;
  for (const Factor& factor : factors) size *= factor.size();
  return size;
}

namespace {

// Shared sweep over axes: factors[k] acts on axis k+1, the fastest-varying
// axis first under the column-stacking convention. For each k the vector is
// viewed as fibers of length n_k spaced by the product of the earlier axis
// sizes, and every fiber is replaced by its image under the factor.
Vector kron_matvec_ptrs(const std::vector<const Factor*>& factors, const Vector& w,
                        bool use_transpose) {
  require(!factors.empty(), errc::invalid_argument, "factor list is empty");
  Index total = 1;
  for (const Factor* factor : factors) total *= factor->size();
  require(w.size() == total, errc::length_mismatch,
          "vector length does not match the factor sizes");

  Vector cur = w;
  Vector nxt(total);
  Index stride = 1;
  for (const Factor* factor : factors) {
    const Index nk = factor->size();
    const Index outer_count = total / (stride * nk);
    Vector fiber(nk);
    for (Index outer = 0; outer < outer_count; ++outer) {
      for (Index inner = 0; inner < stride; ++inner) {
        const Index base = outer * stride * nk + inner;
        for (Index i = 0; i < nk; ++i) fiber(i) = cur(base + i * stride);
        const Vector image = factor->apply(fiber, use_transpose);
        for (Index i = 0; i < nk; ++i) nxt(base + i * stride) = image(i);
      }
    }
    cur.swap(nxt);
    stride *= nk;
  }
  return cur;
}

std::vector<const Factor*> to_ptrs(const FactorList& factors) {
  std::vector<const Factor*> ptrs;
  ptrs.reserve(factors.size());
  for (const Factor& factor : factors) ptrs.push_back(&factor);
  return ptrs;
}

} // namespace

Vector kron_matvec(const FactorList& factors, const Vector& w, bool use_transpose) {
  return kron_matvec_ptrs(to_ptrs(factors), w, use_transpose);
}

Vector mvm1(const FactorList& q_factors, const Vector& z, bool use_transpose) {
  return kron_matvec(q_factors, z, use_transpose);
}

Vector mvm2(const FactorList& q_factors, const FactorList& qhat_factors, const Vector& z) {
  require(q_factors.size() == qhat_factors.size(), errc::length_mismatch,
          "kernel and hat factor lists differ in length");
  require(!q_factors.empty(), errc::invalid_argument, "factor list is empty");
  for (std::size_t k = 0; k < q_factors.size(); ++k)
    require(q_factors[k].size() == qhat_factors[k].size(), errc::length_mismatch,
            "kernel and hat factors differ in size");
  // Hadamard structure: the cost-weighted kernel splits into d Kronecker
  // products, the m-th using the hat factor in position m and plain kernel
  // factors elsewhere.
  std::vector<const Factor*> ptrs = to_ptrs(q_factors);
  Vector acc = Vector::Zero(z.size());
  for (std::size_t m = 0; m < q_factors.size(); ++m) {
    ptrs[m] = &qhat_factors[m];
    acc += kron_matvec_ptrs(ptrs, z, false);
    ptrs[m] = &q_factors[m];
  }
  return acc;
}

Matrix allones_kron_sum(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index ia = 0; ia < a.rows(); ++ia)
    for (Index ja = 0; ja < a.cols(); ++ja)
      for (Index ib = 0; ib < b.rows(); ++ib)
        for (Index jb = 0; jb < b.cols(); ++jb)
          out(ia * b.rows() + ib, ja * b.cols() + jb) = a(ia, ja) + b(ib, jb);
  return out;
}

Matrix allones_kron_sum(const std::vector<Matrix>& axis_terms) {
  require(!axis_terms.empty(), errc::invalid_argument, "term list is empty");
  // axis_terms[k] belongs to axis k+1, the fastest axis, so the fold runs
  // from the last (slowest) term down.
  Matrix acc = axis_terms.back();
  for (std::size_t k = axis_terms.size() - 1; k-- > 0;)
    acc = allones_kron_sum(acc, axis_terms[k]);
  return acc;
}

Matrix kron_dense(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index ia = 0; ia < a.rows(); ++ia)
    for (Index ja = 0; ja < a.cols(); ++ja)
      out.block(ia * b.rows(), ja * b.cols(), b.rows(), b.cols()) = a(ia, ja) * b;
  return out;
}

Matrix kron_dense(const std::vector<Matrix>& axis_factors) {
  require(!axis_factors.empty(), errc::invalid_argument, "factor list is empty");
  Matrix acc = axis_factors.back();
  for (std::size_t k = axis_factors.size() - 1; k-- > 0;)
    acc = kron_dense(acc, axis_factors[k]);
  return acc;
}

bool entrywise_exp_kron_sum_check(const std::vector<Matrix>& axis_terms, double tol) {
  std::vector<Matrix> exp_factors;
  exp_factors.reserve(axis_terms.size());
  for (const Matrix& c : axis_terms) exp_factors.push_back(c.array().exp().matrix());
  const Matrix lhs = allones_kron_sum(axis_terms).array().exp().matrix();
  const Matrix rhs = kron_dense(exp_factors);
  return (lhs - rhs).cwiseAbs().maxCoeff() <= tol;
}

Matrix cost_matrix(const Cost1D& cost, const TensorGrid& grid) {
  std::vector<Matrix> axis_costs;
  axis_costs.reserve(static_cast<std::size_t>(grid.dim()));
  for (Index k = 0; k < grid.dim(); ++k)
    axis_costs.push_back(cost_matrix_1d(cost, grid.axis(k), grid.axis(k)));
  return allones_kron_sum(axis_costs);
}

KernelFactorSet build_kernel_factors(const TensorGrid& grid, const Cost1D& cost,
                                     double lambda, double eps_tol, double eta0,
                                     Index n_min) {
  const SmoothnessParams smoothness = default_smoothness(cost);
  KernelFactorSet set;
  set.n = grid.size();
  for (Index k = 0; k < grid.dim(); ++k) {
    const Grid1D& axis = grid.axis(k);
    const RegularizedKernel kq(cost, lambda, KernelKind::kappa);
    const RegularizedKernel kh(cost, lambda, KernelKind::kappa_hat);
    set.q.emplace_back(std::make_shared<const HMatrix>(
        build_hmatrix(kq, axis, axis, eps_tol, eta0, n_min, smoothness)));
    set.qhat.emplace_back(std::make_shared<const HMatrix>(
        build_hmatrix(kh, axis, axis, eps_tol, eta0, n_min, smoothness)));
  }
  return set;
}

} // namespace sinkdiv
