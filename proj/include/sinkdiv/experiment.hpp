#ifndef SINKDIV_EXPERIMENT_HPP
#define SINKDIV_EXPERIMENT_HPP
//
// Project     : sinkdiv
// Module      : experiment
// Description : three-pulse shift sweep, sign-split losses, scaling benchmark
//

#include "sinkdiv/core.hpp"
#include "sinkdiv/sinkhorn.hpp"
#include "sinkdiv/types.hpp"

#include <string>
#include <vector>

namespace sinkdiv {

struct ExperimentConfig {
  double lambda = 50.0;
  double p = 2.0;
  double eps_tol = 0.01;
  double eps_s = 0.01;
  double eta0 = 1.0; // 2/alpha for the squared-distance cost
  Index n_min = 32;
  long max_iter = 10000;
  int threads = 1;
  // Dense d_S reference: <0 auto (n <= 4096), 0 off, >0 on.
  int with_dense = -1;
};

// f(x) = exp(-((x-s-0.4)/sigma)^2) - exp(-((x-s-0.5)/sigma)^2)
//      + exp(-((x-s-0.6)/sigma)^2) sampled on the grid.
Vector three_pulse(const Grid1D& grid, double sigma, double shift);

// ||f - g||_2 on raw samples.
double euclidean_loss(const Vector& f, const Vector& g);

// Sign-split losses: the parts of f and g are normalized independently and
// the per-part distances added.
double wasserstein_loss(const Vector& f, const Vector& g, const Grid1D& grid);

enum class SinkhornMode { dense, hierarchical };

double sinkhorn_loss(const Vector& f, const Vector& g, const Grid1D& grid,
                     SinkhornMode mode, const ExperimentConfig& config);

struct SweepRow {
  double shift = 0.0;
  double d_e = 0.0;
  double d_w = 0.0;
  double d_s = 0.0;   // dense reference; NaN when disabled
  double d_s_h = 0.0; // hierarchical
  double seconds_e = 0.0;
  double seconds_w = 0.0;
  double seconds_s = 0.0;
  double seconds_s_h = 0.0;
};

struct SweepResult {
  Index n = 0;
  double sigma = 0.0;
  std::vector<SweepRow> rows;
};

// num_shifts evenly spaced shifts over [-0.3, 0.3]; f is the unshifted
// signal. Kernel factors (and the dense kernel, when enabled) are built once
// and shared; rows are independent and computed in parallel when
// config.threads > 1. Deterministic for fixed inputs.
SweepResult run_sweep(Index n, double sigma, Index num_shifts,
                      const ExperimentConfig& config);

// Columns: shift,d_E,d_W,d_S,d_S_H.
void write_sweep_csv(const SweepResult& result, const std::string& path);

struct BenchRow {
  Index n = 0;
  double seconds = 0.0; // median over repetitions
  int repetitions = 0;
};

// One evaluation = hierarchical kernel-factor construction + scaling +
// divergence for the positive pulse parts at shifts 0 and 0.1.
double hierarchical_eval_seconds(Index n, double sigma, const ExperimentConfig& config);
double dense_eval_seconds(Index n, double sigma, const ExperimentConfig& config);

// Median of max(3, reps) repetitions per n.
std::vector<BenchRow> bench_scaling(const std::vector<Index>& n_list, double sigma,
                                    int reps, const ExperimentConfig& config);

// Columns: n,seconds,repetitions.
void write_bench_csv(const std::vector<BenchRow>& rows, const std::string& path);

} // namespace sinkdiv

#endif
