#ifndef SINKDIV_CORE_HPP
#define SINKDIV_CORE_HPP
//
// Project     : sinkdiv
// Module      : core
// Description : grids, probability vectors, signed signals, csv i/o
//

#include "sinkdiv/types.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace sinkdiv {

// Uniform 1-D grid x_i = x_min + i * spacing, i = 0 .. n-1 (n >= 2).
class Grid1D {
public:
  Grid1D(double x_min, double x_max, Index n);

  double x_min() const noexcept { return x_min_; }
  double x_max() const noexcept { return x_max_; }
  Index size() const noexcept { return n_; }
  double spacing() const noexcept { return spacing_; }
  double point(Index i) const { return x_min_ + static_cast<double>(i) * spacing_; }
  Vector points() const;

private:
  double x_min_;
  double x_max_;
  double spacing_;
  Index n_;
};

// Tensor product of 1-D grids. The linear index is column-stacking order:
// axis 1 varies fastest, so linear = i1 + n1*(i2 + n2*(i3 + ...)).
// This convention is shared with the Kronecker operators: an operator list
// (A^(1), ..., A^(d)) acts as A^(d) x ... x A^(1), factor k on axis k.
class TensorGrid {
public:
  explicit TensorGrid(std::vector<Grid1D> axes);

  Index dim() const noexcept { return static_cast<Index>(axes_.size()); }
  Index size() const noexcept { return size_; }
  const Grid1D& axis(Index k) const;

  Index linear_index(const std::vector<Index>& multi) const;
  std::vector<Index> multi_index(Index linear) const;

private:
  std::vector<Grid1D> axes_;
  Index size_;
};

// Nonnegative vector with entries summing to 1 within 1e-12 (compensated sum).
class ProbabilityVector {
public:
  explicit ProbabilityVector(Vector values);

  const Vector& values() const noexcept { return values_; }
  Index size() const noexcept { return values_.size(); }

private:
  Vector values_;
};

// Arbitrary finite real samples on a grid.
class SignedSignal {
public:
  explicit SignedSignal(Vector values);

  const Vector& values() const noexcept { return values_; }
  Index size() const noexcept { return values_.size(); }

private:
  Vector values_;
};

struct SplitSignal {
  ProbabilityVector pos;
  ProbabilityVector neg;
  double pos_mass;
  double neg_mass;
};

// Compensated (Kahan) sum; used wherever a mass or cdf must not drift.
double stable_sum(const Vector& v);

// Splits into sign parts and normalizes each to unit mass.
// pos = max(f,0)/pos_mass, neg = max(-f,0)/neg_mass; throws zero_mass_part
// if a part has total mass <= 1e-14. pos_mass*pos - neg_mass*neg
// reconstructs the signal.
SplitSignal split_and_normalize(const SignedSignal& signal);

// Piecewise-linear resampling of (src_points, src_values) onto target.
// src_points must be strictly increasing; the target grid must lie inside
// [src_points.front(), src_points.back()] (out_of_range otherwise).
Vector resample_to_grid(const Vector& src_values, const Vector& src_points,
                        const Grid1D& target);

// CSV format: optional first line "# n=<int> d=<int> nk=<comma list>",
// then one value per line.
struct VectorCsv {
  Vector values;
  bool has_meta = false;
  Index d = 1;
  std::vector<Index> nk;
};

VectorCsv read_vector_csv(const std::string& path);
VectorCsv read_vector_csv(std::istream& in, const std::string& name);
void write_vector_csv(const std::string& path, const Vector& values, Index d,
                      const std::vector<Index>& nk);
void write_vector_csv(const std::string& path, const Vector& values);

} // namespace sinkdiv

#endif
