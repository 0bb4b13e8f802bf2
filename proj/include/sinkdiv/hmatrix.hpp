#ifndef SINKDIV_HMATRIX_HPP
#define SINKDIV_HMATRIX_HPP
//
// Project     : sinkdiv
// Module      : hmatrix
// Description : quadtree block partition and hierarchical low-rank kernel matrices
//

#include "sinkdiv/core.hpp"
#include "sinkdiv/kernels.hpp"
#include "sinkdiv/types.hpp"

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <memory>
#include <vector>

namespace sinkdiv {

// Half-open index range [start, end).
struct IndexRange {
  Index start = 0;
  Index end = 0;

  Index size() const noexcept { return end - start; }
};

enum class BlockKind {
  internal,
  lowrank, // admissible leaf stored as L * R^T
  dense,   // leaf stored entrywise
};

struct BlockNode {
  IndexRange row;
  IndexRange col;
  BlockKind kind = BlockKind::dense;
  // Partition classification; stays true for admissible blocks that fall back
  // to dense storage because the requested rank reaches the block size.
  bool admissible = false;
  double eta = 0.0; // diam(row cluster)/dist(row, col); +inf when clusters touch
  int rank = 0;     // interpolation rank of a lowrank leaf, 0 otherwise
  int child[4] = {-1, -1, -1, -1};
  // On one uniform grid every cost is a function of x - y, so same-width
  // leaves at equal diagonal offset hold identical factors; they share one
  // panel, which keeps the stored-reals count near-linear in n. Dense leaves
  // stay per-node so each reproduces its own entries exactly.
  std::shared_ptr<const Matrix> L; // rows(row) x rank Lagrange factor
  std::shared_ptr<const Matrix> R; // rows(col) x rank kernel-at-nodes factor
  Matrix D;                        // dense leaf payload
};

struct BlockTree {
  Index n = 0;
  Index n_min = 0;
  std::vector<BlockNode> nodes;
  std::vector<int> leaf_ids; // depth-first construction order; matvec order
  int root = -1;
};

// diam(tau)/dist(tau, sigma) with diam over the row cluster points and
// dist = min |x_i - y_j|; +inf when the cluster intervals touch or overlap.
double block_eta(const IndexRange& row, const IndexRange& col, const Grid1D& grid_x,
                 const Grid1D& grid_y);

bool admissible(const IndexRange& row, const IndexRange& col, const Grid1D& grid_x,
                const Grid1D& grid_y, double eta0);

// Quadtree over [0,n)^2 with midpoint splits: a block becomes a leaf when it
// is admissible or has size n_min; every inadmissible leaf is n_min x n_min.
// Requires n = n_min * 2^m (bad_size otherwise) and both grids of size n.
BlockTree build_partition(const Grid1D& grid_x, const Grid1D& grid_y, double eta0,
                          Index n_min);

// Smallest interpolation rank with local error bound c * (alpha*eta/4)^r <=
// eps_tol / n, i.e. ceil(log(eps_tol/(c n)) / log(alpha eta / 4)), clamped to
// >= 1. Throws divergent_rank when alpha*eta/4 >= 1.
int optimal_rank(double eps_tol, Index n, double c, double alpha, double eta);

// Barycentric Lagrange interpolation of kernel(x, y) in x at r Chebyshev
// points of [xs.front(), xs.back()]: L(i,k) = ell(x_i) w_k / (x_i - xhat_k),
// R(j,k) = kernel(xhat_k, ys_j), block ~= L R^T. A row point within
// 1e-14*diam of a node gets the exact unit interpolation row.
void build_lowrank_block(const std::function<double(double, double)>& kernel,
                         const Vector& xs, const Vector& ys, int r, Matrix& L,
                         Matrix& R);
void build_lowrank_block(const RegularizedKernel& kernel, const Vector& xs,
                         const Vector& ys, int r, Matrix& L, Matrix& R);

class HMatrix {
public:
  HMatrix(BlockTree tree, Grid1D grid_x, Grid1D grid_y);

  Index rows() const noexcept { return tree_.n; }
  Index cols() const noexcept { return tree_.n; }
  const BlockTree& tree() const noexcept { return tree_; }
  const Grid1D& grid_x() const noexcept { return grid_x_; }
  const Grid1D& grid_y() const noexcept { return grid_y_; }

  // Immutable after construction; concurrent matvec calls are safe. A single
  // matvec accumulates leaf contributions sequentially in leaf_ids order, so
  // results are bitwise reproducible.
  Vector matvec(const Vector& z) const;
  Vector matvec_transpose(const Vector& z) const;

  // Diagnostic reconstruction; quadratic, test use only.
  Matrix to_dense() const;

  std::size_t stored_doubles() const;

  // One line per leaf: row_start,row_end,col_start,col_end,kind,rank.
  void write_leaves_csv(std::ostream& out) const;

private:
  BlockTree tree_;
  Grid1D grid_x_;
  Grid1D grid_y_;
};

// Builds the block partition and fills every leaf: dense leaves entrywise,
// admissible leaves at the per-block optimal rank (c = smoothness.c0). An
// admissible block whose rank reaches its size is stored dense (exact).
HMatrix build_hmatrix(const RegularizedKernel& kernel, const Grid1D& grid_x,
                      const Grid1D& grid_y, double eps_tol, double eta0, Index n_min,
                      const SmoothnessParams& smoothness);
HMatrix build_hmatrix(const RegularizedKernel& kernel, const Grid1D& grid_x,
                      const Grid1D& grid_y, double eps_tol, double eta0, Index n_min);

} // namespace sinkdiv

#endif
