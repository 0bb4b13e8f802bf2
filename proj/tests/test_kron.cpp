//
// Project     : sinkdiv
// Module      : kron tests
//

#include "sinkdiv/kron.hpp"

#include <doctest.h>

#include <cmath>
#include <memory>
#include <random>
#include <vector>

using namespace sinkdiv;

namespace {

Vector random_vector(Index n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> dist(0.0, 1.0);
  Vector v(n);
  for (Index i = 0; i < n; ++i) v(i) = dist(rng);
  return v;
}

Matrix random_matrix(Index n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> dist(0.0, 1.0);
  Matrix m(n, n);
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i < n; ++i) m(i, j) = dist(rng);
  return m;
}

std::vector<Matrix> random_factors(const std::vector<Index>& shape, unsigned seed) {
  std::vector<Matrix> factors;
  for (std::size_t k = 0; k < shape.size(); ++k)
    factors.push_back(random_matrix(shape[k], seed + unsigned(k)));
  return factors;
}

FactorList wrap_dense(const std::vector<Matrix>& factors) {
  FactorList list;
  for (const Matrix& m : factors) list.emplace_back(m);
  return list;
}

} // namespace

TEST_CASE("the axis sweep reproduces the frozen two-axis example") {
  // Axis 1 factor identity, axis 2 factor the swap; the operator is
  // swap x id, which exchanges the two halves of the length-4 vector.
  Matrix id2 = Matrix::Identity(2, 2);
  Matrix swap(2, 2);
  swap << 0, 1, 1, 0;
  FactorList factors;
  factors.emplace_back(id2);
  factors.emplace_back(swap);
  Vector w(4);
  w << 1, 2, 3, 4;
  const Vector out = kron_matvec(factors, w);
  REQUIRE(out.size() == 4);
  CHECK(out(0) == 3.0);
  CHECK(out(1) == 4.0);
  CHECK(out(2) == 1.0);
  CHECK(out(3) == 2.0);
}

TEST_CASE("the axis sweep matches the assembled kronecker product") {
  const std::vector<std::vector<Index>> shapes = {
      {8}, {8, 8}, {4, 16}, {8, 8, 8}, {2, 4, 8}};
  unsigned seed = 1000;
  for (const auto& shape : shapes) {
    const std::vector<Matrix> dense = random_factors(shape, seed);
    seed += 10;
    const FactorList factors = wrap_dense(dense);
    const Matrix full = kron_dense(dense);
    const Index n = kron_size(factors);
    REQUIRE(full.rows() == n);
    for (unsigned rep = 0; rep < 20; ++rep) {
      const Vector w = random_vector(n, seed * 100 + rep);
      const Vector fast = kron_matvec(factors, w);
      const Vector slow = full * w;
      const Vector fast_t = kron_matvec(factors, w, true);
      const Vector slow_t = full.transpose() * w;
      CHECK((fast - slow).cwiseAbs().maxCoeff() <= 1e-12 * slow.cwiseAbs().maxCoeff());
      CHECK((fast_t - slow_t).cwiseAbs().maxCoeff() <=
            1e-12 * slow_t.cwiseAbs().maxCoeff());
    }
  }
}

TEST_CASE("the all-ones kronecker sum adds one entry from each factor") {
  Matrix a(2, 2), b(2, 2);
  a << 1, 2, 3, 4;
  b << 10, 20, 30, 40;
  const Matrix s = allones_kron_sum(a, b);
  REQUIRE(s.rows() == 4);
  // Row (ia, ib), column (ja, jb) holds a(ia, ja) + b(ib, jb).
  CHECK(s(0, 0) == 11.0);
  CHECK(s(0, 1) == 21.0);
  CHECK(s(1, 0) == 31.0);
  CHECK(s(0, 2) == 12.0);
  CHECK(s(3, 3) == 44.0);

  // The axis-ordered fold keeps axis 1 fastest: entry ((0,0),(j1,j2)) is
  // c1(0, j1) + c2(0, j2).
  const Matrix folded = allones_kron_sum(std::vector<Matrix>{a, b});
  CHECK(folded(0, 1) == a(0, 1) + b(0, 0));
  CHECK(folded(0, 2) == a(0, 0) + b(0, 1));
}

TEST_CASE("exponentials turn cost sums into kernel products") {
  // exp[-lambda (C2 (+) C1)] == exp[-lambda C2] x exp[-lambda C1], checked
  // entrywise on dense assemblies over several shapes.
  for (const double lambda : {0.5, 2.0}) {
    for (const auto& shape : std::vector<std::vector<Index>>{{4, 4}, {2, 4, 8}}) {
      std::vector<Matrix> terms;
      for (std::size_t k = 0; k < shape.size(); ++k) {
        const Grid1D axis(0.0, 1.0, shape[k]);
        terms.push_back(-lambda *
                        cost_matrix_1d(Cost1D::squared_distance(), axis, axis));
      }
      CHECK(entrywise_exp_kron_sum_check(terms, 1e-13));
    }
  }
}

TEST_CASE("tensor cost assembly matches direct evaluation") {
  const Grid1D a(0.0, 1.0, 3);
  const Grid1D b(0.0, 1.0, 4);
  const TensorGrid grid({a, b});
  const Matrix c = cost_matrix(Cost1D::squared_distance(), grid);
  REQUIRE(c.rows() == 12);
  for (Index lin_i = 0; lin_i < 12; ++lin_i) {
    for (Index lin_j = 0; lin_j < 12; ++lin_j) {
      const auto mi = grid.multi_index(lin_i);
      const auto mj = grid.multi_index(lin_j);
      const double dx = a.point(mi[0]) - a.point(mj[0]);
      const double dy = b.point(mi[1]) - b.point(mj[1]);
      CHECK(c(lin_i, lin_j) == doctest::Approx(dx * dx + dy * dy).epsilon(1e-13));
    }
  }
}

TEST_CASE("the hadamard splitting reproduces the dense cost-weighted kernel") {
  // Qhat = (C2 (+) C1) .* (Q2 x Q1) equals the sum of per-axis hat products;
  // mvm2 on dense factors must match the assembled Qhat exactly.
  const double lambda = 2.0;
  const std::vector<Index> shape = {4, 8};
  std::vector<Matrix> costs, qs, qhats;
  for (Index nk : shape) {
    const Grid1D axis(0.0, 1.0, nk);
    const Matrix c = cost_matrix_1d(Cost1D::squared_distance(), axis, axis);
    costs.push_back(c);
    qs.push_back((-lambda * c).array().exp().matrix());
    qhats.push_back(c.cwiseProduct(qs.back()));
  }
  const Matrix cost_full = allones_kron_sum(costs);
  const Matrix q_full = kron_dense(qs);
  const Matrix qhat_full = cost_full.cwiseProduct(q_full);

  const FactorList q_list = wrap_dense(qs);
  const FactorList qhat_list = wrap_dense(qhats);
  for (unsigned rep = 0; rep < 10; ++rep) {
    const Vector z = random_vector(32, 4000 + rep);
    const Vector fast = mvm2(q_list, qhat_list, z);
    const Vector slow = qhat_full * z;
    CHECK((fast - slow).cwiseAbs().maxCoeff() <= 1e-12 * slow.cwiseAbs().maxCoeff());
  }
}

TEST_CASE("hierarchical factors agree with their own dense reconstruction") {
  const Grid1D axis(0.0, 1.0, 128);
  const TensorGrid grid({axis, axis});
  const KernelFactorSet set = build_kernel_factors(grid, Cost1D::squared_distance(),
                                                   50.0, 0.01, 1.0, 32);
  REQUIRE(set.q.size() == 2);
  REQUIRE(set.qhat.size() == 2);
  std::vector<Matrix> q_dense, qhat_dense;
  for (std::size_t k = 0; k < 2; ++k) {
    REQUIRE(set.q[k].is_hierarchical());
    q_dense.push_back(set.q[k].hierarchical().to_dense());
    qhat_dense.push_back(set.qhat[k].hierarchical().to_dense());
  }
  const FactorList q_list = wrap_dense(q_dense);
  const FactorList qhat_list = wrap_dense(qhat_dense);
  for (unsigned rep = 0; rep < 5; ++rep) {
    const Vector z = random_vector(set.n, 5000 + rep).cwiseAbs();
    const Vector a1 = set.apply_q(z);
    const Vector a2 = kron_matvec(q_list, z);
    CHECK((a1 - a2).cwiseAbs().maxCoeff() <= 1e-12 * a2.cwiseAbs().maxCoeff());
    const Vector b1 = set.apply_qt(z);
    const Vector b2 = kron_matvec(q_list, z, true);
    CHECK((b1 - b2).cwiseAbs().maxCoeff() <= 1e-12 * b2.cwiseAbs().maxCoeff());
    const Vector c1 = set.apply_qhat(z);
    const Vector c2 = mvm2(q_list, qhat_list, z);
    CHECK((c1 - c2).cwiseAbs().maxCoeff() <= 1e-12 * c2.cwiseAbs().maxCoeff());
  }
}

TEST_CASE("shape violations are rejected") {
  FactorList factors;
  factors.emplace_back(Matrix::Identity(4, 4));
  CHECK_THROWS_AS(kron_matvec(factors, Vector::Zero(5)), error);
  CHECK_THROWS_AS(kron_matvec(FactorList{}, Vector::Zero(4)), error);
  CHECK_THROWS_AS(Factor(Matrix::Zero(3, 4)), error);

  FactorList qhat;
  qhat.emplace_back(Matrix::Identity(5, 5));
  CHECK_THROWS_AS(mvm2(factors, qhat, Vector::Zero(4)), error);
}

