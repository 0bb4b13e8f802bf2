#ifndef SINKDIV_KRON_HPP
#define SINKDIV_KRON_HPP
//
// Project     : sinkdiv
// Module      : kron
// Description : Kronecker-factor operators, all-ones Kronecker sums, MVM1/MVM2
//

#include "sinkdiv/hmatrix.hpp"
#include "sinkdiv/kernels.hpp"
#include "sinkdiv/types.hpp"

#include <memory>
#include <vector>

namespace sinkdiv {

// One axis factor: dense matrix or hierarchical approximation. Square.
class Factor {
public:
  explicit Factor(Matrix dense);
  explicit Factor(std::shared_ptr<const HMatrix> h);

  Index size() const noexcept { return size_; }
  bool is_hierarchical() const noexcept { return h_ != nullptr; }
  const Matrix& dense() const { return dense_; }
  const HMatrix& hierarchical() const { return *h_; }

  Vector apply(const Vector& z, bool transpose) const;

private:
  Matrix dense_;
  std::shared_ptr<const HMatrix> h_;
  Index size_;
};

// factors[k] acts on axis k+1; the represented operator is
// A^(d) x ... x A^(1) under the axis-1-fastest linearization.
using FactorList = std::vector<Factor>;

Index kron_size(const FactorList& factors);

// (A^(d) x ... x A^(1)) w via d in-place axis sweeps; use_transpose applies
// every factor transposed. Throws length_mismatch on a wrong-size w.
Vector kron_matvec(const FactorList& factors, const Vector& w, bool use_transpose = false);

// MVM1: z -> Q z for Q = Q^(d) x ... x Q^(1).
Vector mvm1(const FactorList& q_factors, const Vector& z, bool use_transpose = false);

// MVM2: z -> Qhat z where Qhat = sum_k A_k^(d) x ... x A_k^(1) with
// A_k^(m) = Qhat^(m) for m = k and Q^(m) otherwise; costs d kron matvecs.
Vector mvm2(const FactorList& q_factors, const FactorList& qhat_factors, const Vector& z);

// All-ones Kronecker sum A (+) B = A x J + J x B (B on the faster axis):
// result[(ia,ib),(ja,jb)] = A(ia,ja) + B(ib,jb). Dense test utility.
Matrix allones_kron_sum(const Matrix& a, const Matrix& b);

// C^(d) (+) ... (+) C^(1) for axis-ordered input (axis_terms[k] = C^(k+1)).
Matrix allones_kron_sum(const std::vector<Matrix>& axis_terms);

// Dense Kronecker product; test utility. kron_dense(A, B) has B fastest.
Matrix kron_dense(const Matrix& a, const Matrix& b);
Matrix kron_dense(const std::vector<Matrix>& axis_factors);

// Checks exp[C^(d) (+) ... (+) C^(1)] == exp[C^(d)] x ... x exp[C^(1)]
// entrywise to tol on the assembled dense matrices.
bool entrywise_exp_kron_sum_check(const std::vector<Matrix>& axis_terms, double tol);

// Dense tensor-product cost matrix: the all-ones Kronecker sum of the per-axis
// cost matrices. Quadratic in grid size; oracle use.
Matrix cost_matrix(const Cost1D& cost, const TensorGrid& grid);

// Hierarchical factors of Q = exp[-lambda C] and Qhat = C .* Q, one pair per axis.
struct KernelFactorSet {
  FactorList q;
  FactorList qhat;
  Index n = 0;

  Vector apply_q(const Vector& z) const { return mvm1(q, z, false); }
  Vector apply_qt(const Vector& z) const { return mvm1(q, z, true); }
  Vector apply_qhat(const Vector& z) const { return mvm2(q, qhat, z); }
};

KernelFactorSet build_kernel_factors(const TensorGrid& grid, const Cost1D& cost,
                                     double lambda, double eps_tol, double eta0,
                                     Index n_min);

} // namespace sinkdiv

#endif
