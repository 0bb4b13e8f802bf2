//
// Project     : sinkdiv
// Module      : hmatrix
//

#include "sinkdiv/hmatrix.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <tuple>
#include <utility>

namespace sinkdiv {

double block_eta(const IndexRange& row, const IndexRange& col, const Grid1D& grid_x,
                 const Grid1D& grid_y) {
  const double a1 = grid_x.point(row.start);
  const double b1 = grid_x.point(row.end - 1);
  const double a2 = grid_y.point(col.start);
  const double b2 = grid_y.point(col.end - 1);
  const double dist = std::max({0.0, a2 - b1, a1 - b2});
  if (dist == 0.0) return std::numeric_limits<double>::infinity();
  return (b1 - a1) / dist;
}

bool admissible(const IndexRange& row, const IndexRange& col, const Grid1D& grid_x,
                const Grid1D& grid_y, double eta0) {
  return block_eta(row, col, grid_x, grid_y) <= eta0;
}

BlockTree build_partition(const Grid1D& grid_x, const Grid1D& grid_y, double eta0,
                          Index n_min) {
  require(std::isfinite(eta0) && eta0 > 0.0, errc::invalid_argument,
          "admissibility parameter must be positive");
  require(n_min >= 1, errc::invalid_argument, "minimal block size must be at least 1");
  const Index n = grid_x.size();
  require(grid_y.size() == n, errc::length_mismatch, "partition needs square index sets");
  require(n >= n_min && n % n_min == 0, errc::bad_size,
          "index set size must be n_min times a power of two");
  const Index ratio = n / n_min;
  require((ratio & (ratio - 1)) == 0, errc::bad_size,
          "index set size must be n_min times a power of two");

  BlockTree tree;
  tree.n = n;
  tree.n_min = n_min;

  // Children are appended after their parent; recursion order fixes leaf_ids
  // as the depth-first traversal, which matvec replays verbatim.
  const std::function<int(IndexRange, IndexRange)> descend =
      [&](IndexRange row, IndexRange col) -> int {
    const int id = static_cast<int>(tree.nodes.size());
    BlockNode node;
    node.row = row;
    node.col = col;
    node.eta = block_eta(row, col, grid_x, grid_y);
    node.admissible = node.eta <= eta0;
    if (node.admissible) {
      node.kind = BlockKind::lowrank;
    } else if (row.size() <= n_min) {
      node.kind = BlockKind::dense;
    } else {
      node.kind = BlockKind::internal;
    }
    tree.nodes.push_back(std::move(node));
    if (tree.nodes[static_cast<std::size_t>(id)].kind != BlockKind::internal) {
      tree.leaf_ids.push_back(id);
      return id;
    }
    const Index rm = (row.start + row.end) / 2;
    const Index cm = (col.start + col.end) / 2;
    const IndexRange rl{row.start, rm}, rh{rm, row.end};
    const IndexRange cl{col.start, cm}, ch{cm, col.end};
    const int c0 = descend(rl, cl);
    const int c1 = descend(rl, ch);
    const int c2 = descend(rh, cl);
    const int c3 = descend(rh, ch);
    BlockNode& parent = tree.nodes[static_cast<std::size_t>(id)];
    parent.child[0] = c0;
    parent.child[1] = c1;
    parent.child[2] = c2;
    parent.child[3] = c3;
    return id;
  };
  tree.root = descend(IndexRange{0, n}, IndexRange{0, n});
  return tree;
}

int optimal_rank(double eps_tol, Index n, double c, double alpha, double eta) {
  require(std::isfinite(eps_tol) && eps_tol > 0.0, errc::invalid_argument,
          "tolerance must be positive");
  require(n >= 1, errc::invalid_argument, "matrix size must be at least 1");
  require(std::isfinite(c) && c > 0.0, errc::invalid_argument,
          "smoothness constant must be positive");
  require(std::isfinite(alpha) && alpha > 0.0, errc::invalid_argument,
          "smoothness growth rate must be positive");
  require(eta >= 0.0, errc::invalid_argument, "eta must be nonnegative");
  if (eta == 0.0) return 1;
  const double rho = alpha * eta / 4.0;
  require(rho < 1.0, errc::divergent_rank,
          "interpolation ratio alpha*eta/4 is not a contraction");
  const double num = std::log(eps_tol / (c * static_cast<double>(n)));
  if (num >= 0.0) return 1;
  const int r = static_cast<int>(std::ceil(num / std::log(rho)));
  return r < 1 ? 1 : r;
}

void build_lowrank_block(const std::function<double(double, double)>& kernel,
                         const Vector& xs, const Vector& ys, int r, Matrix& L, Matrix& R) {
  require(r >= 1, errc::invalid_argument, "interpolation rank must be at least 1");
  require(xs.size() >= 1 && ys.size() >= 1, errc::invalid_argument,
          "interpolation needs nonempty point sets");
  const Index m = xs.size();
  const double a = xs(0);
  const double b = xs(m - 1);
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double diam = b - a;
  require(diam > 0.0, errc::invalid_argument, "interpolation interval is degenerate");

  // Chebyshev roots and barycentric weights on the reference interval [-1,1].
  // The affine map t = (x - center)/half makes the weight scale factor
  // 2^{r-1}/r exact; powers of half cancel between the node products and the
  // weights, so no h-dependent rescaling is needed.
  Vector t_nodes(r), weights(r), x_nodes(r);
  for (int k = 0; k < r; ++k) {
    const double theta = (2.0 * k + 1.0) * M_PI / (2.0 * r);
    t_nodes(k) = std::cos(theta);
    x_nodes(k) = center + half * t_nodes(k);
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    weights(k) = sign * std::sin(theta) * std::ldexp(1.0, r - 1) / static_cast<double>(r);
  }

  L.resize(m, r);
  for (Index i = 0; i < m; ++i) {
    const double ti = (xs(i) - center) / half;
    int hit = -1;
    for (int k = 0; k < r; ++k) {
      if (std::abs(xs(i) - x_nodes(k)) < 1e-14 * diam) {
        hit = k;
        break;
      }
    }
    if (hit >= 0) {
      L.row(i).setZero();
      L(i, hit) = 1.0;
      continue;
    }
    double ell = 1.0;
    for (int k = 0; k < r; ++k) ell *= ti - t_nodes(k);
    for (int k = 0; k < r; ++k) L(i, k) = ell * weights(k) / (ti - t_nodes(k));
  }

  R.resize(ys.size(), r);
  for (int k = 0; k < r; ++k) {
    for (Index j = 0; j < ys.size(); ++j) R(j, k) = kernel(x_nodes(k), ys(j));
  }
}

void build_lowrank_block(const RegularizedKernel& kernel, const Vector& xs, const Vector& ys,
                         int r, Matrix& L, Matrix& R) {
  build_lowrank_block([&](double x, double y) { return kernel.eval(x, y); }, xs, ys, r, L, R);
}

HMatrix::HMatrix(BlockTree tree, Grid1D grid_x, Grid1D grid_y)
    : tree_(std::move(tree)), grid_x_(grid_x), grid_y_(grid_y) {
  require(grid_x_.size() == tree_.n && grid_y_.size() == tree_.n, errc::length_mismatch,
          "grids do not match the block tree");
}

Vector HMatrix::matvec(const Vector& z) const {
  require(z.size() == cols(), errc::length_mismatch, "matvec input length mismatch");
  Vector out = Vector::Zero(rows());
  Vector tmp;
  for (int id : tree_.leaf_ids) {
    const BlockNode& node = tree_.nodes[static_cast<std::size_t>(id)];
    const auto zi = z.segment(node.col.start, node.col.size());
    auto oi = out.segment(node.row.start, node.row.size());
    if (node.kind == BlockKind::dense) {
      oi.noalias() += node.D * zi;
    } else {
      if (tmp.size() < node.rank) tmp.resize(node.rank);
      tmp.head(node.rank).noalias() = node.R->transpose() * zi;
      oi.noalias() += (*node.L) * tmp.head(node.rank);
    }
  }
  return out;
}

Vector HMatrix::matvec_transpose(const Vector& z) const {
  require(z.size() == rows(), errc::length_mismatch, "matvec input length mismatch");
  Vector out = Vector::Zero(cols());
  Vector tmp;
  for (int id : tree_.leaf_ids) {
    const BlockNode& node = tree_.nodes[static_cast<std::size_t>(id)];
    const auto zi = z.segment(node.row.start, node.row.size());
    auto oi = out.segment(node.col.start, node.col.size());
    if (node.kind == BlockKind::dense) {
      oi.noalias() += node.D.transpose() * zi;
    } else {
      if (tmp.size() < node.rank) tmp.resize(node.rank);
      tmp.head(node.rank).noalias() = node.L->transpose() * zi;
      oi.noalias() += (*node.R) * tmp.head(node.rank);
    }
  }
  return out;
}

Matrix HMatrix::to_dense() const {
  Matrix out = Matrix::Zero(rows(), cols());
  for (int id : tree_.leaf_ids) {
    const BlockNode& node = tree_.nodes[static_cast<std::size_t>(id)];
    auto block = out.block(node.row.start, node.col.start, node.row.size(), node.col.size());
    if (node.kind == BlockKind::dense) {
      block = node.D;
    } else {
      block.noalias() = (*node.L) * node.R->transpose();
    }
  }
  return out;
}

std::size_t HMatrix::stored_doubles() const {
  std::size_t total = 0;
  std::set<const Matrix*> seen;
  for (int id : tree_.leaf_ids) {
    const BlockNode& node = tree_.nodes[static_cast<std::size_t>(id)];
    if (node.kind == BlockKind::dense) {
      total += static_cast<std::size_t>(node.D.size());
    } else {
      if (seen.insert(node.L.get()).second)
        total += static_cast<std::size_t>(node.L->size());
      if (seen.insert(node.R.get()).second)
        total += static_cast<std::size_t>(node.R->size());
    }
  }
  return total;
}

void HMatrix::write_leaves_csv(std::ostream& out) const {
  out << "row_start,row_end,col_start,col_end,kind,rank\n";
  for (int id : tree_.leaf_ids) {
    const BlockNode& node = tree_.nodes[static_cast<std::size_t>(id)];
    out << node.row.start << ',' << node.row.end << ',' << node.col.start << ','
        << node.col.end << ',' << (node.kind == BlockKind::dense ? "dense" : "lowrank")
        << ',' << node.rank << '\n';
  }
}

HMatrix build_hmatrix(const RegularizedKernel& kernel, const Grid1D& grid_x,
                      const Grid1D& grid_y, double eps_tol, double eta0, Index n_min,
                      const SmoothnessParams& smoothness) {
  BlockTree tree = build_partition(grid_x, grid_y, eta0, n_min);
  const Index n = tree.n;
  const Vector xs_all = grid_x.points();
  const Vector ys_all = grid_y.points();

  // Every cost is a function of x - y, so on a single uniform grid the factor
  // pair of a low-rank leaf depends only on (width, col - row offset, rank);
  // equal keys share one panel pair. The leaf order is deterministic, so the
  // representative block for each key is too.
  const bool share = grid_x.x_min() == grid_y.x_min() &&
                     grid_x.x_max() == grid_y.x_max();
  std::map<std::tuple<Index, Index, int>, std::pair<std::shared_ptr<const Matrix>,
                                                    std::shared_ptr<const Matrix>>>
      panels;

  for (int id : tree.leaf_ids) {
    BlockNode& node = tree.nodes[static_cast<std::size_t>(id)];
    if (node.kind == BlockKind::lowrank) {
      const int r = optimal_rank(eps_tol, n, smoothness.c0, smoothness.alpha, node.eta);
      if (r >= node.row.size()) {
        // A rank at or above the block size would cost more than the exact
        // block; store this admissible block densely instead.
        node.kind = BlockKind::dense;
      } else {
        node.rank = r;
        const auto key =
            std::make_tuple(node.row.size(), node.col.start - node.row.start, r);
        auto hit = share ? panels.find(key) : panels.end();
        if (hit == panels.end()) {
          Matrix L, R;
          build_lowrank_block(kernel, xs_all.segment(node.row.start, node.row.size()),
                              ys_all.segment(node.col.start, node.col.size()), r, L, R);
          node.L = std::make_shared<const Matrix>(std::move(L));
          node.R = std::make_shared<const Matrix>(std::move(R));
          if (share) panels.emplace(key, std::make_pair(node.L, node.R));
        } else {
          node.L = hit->second.first;
          node.R = hit->second.second;
        }
        continue;
      }
    }
    node.D.resize(node.row.size(), node.col.size());
    for (Index j = 0; j < node.col.size(); ++j) {
      const double y = ys_all(node.col.start + j);
      for (Index i = 0; i < node.row.size(); ++i)
        node.D(i, j) = kernel.eval(xs_all(node.row.start + i), y);
    }
  }
  return HMatrix(std::move(tree), grid_x, grid_y);
}

HMatrix build_hmatrix(const RegularizedKernel& kernel, const Grid1D& grid_x,
                      const Grid1D& grid_y, double eps_tol, double eta0, Index n_min) {
  return build_hmatrix(kernel, grid_x, grid_y, eps_tol, eta0, n_min,
                       default_smoothness(kernel.cost()));
}

} // namespace sinkdiv
