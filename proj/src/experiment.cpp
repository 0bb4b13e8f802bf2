//
// Project     : sinkdiv
// Module      : experiment
//

#include "sinkdiv/experiment.hpp"

#include "sinkdiv/wasserstein1d.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <limits>
#include <vector>

namespace sinkdiv {

namespace {

double now_seconds() {
  using clock = std::chrono::steady_clock;
  return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

SinkhornConfig sinkhorn_config(const ExperimentConfig& config) {
  SinkhornConfig sc;
  sc.lambda = config.lambda;
  sc.p = config.p;
  sc.eps_s = config.eps_s;
  sc.max_iter = config.max_iter;
  return sc;
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  require(out.good(), errc::io_error, "cannot open " + path + " for writing");
  out << text;
  require(out.good(), errc::io_error, "write failed for " + path);
}

} // namespace

Vector three_pulse(const Grid1D& grid, double sigma, double shift) {
  require(std::isfinite(sigma) && sigma > 0.0, errc::invalid_argument,
          "pulse width must be positive");
  require(std::isfinite(shift), errc::invalid_argument, "shift must be finite");
  Vector values(grid.size());
  for (Index i = 0; i < grid.size(); ++i) {
    const double x = grid.point(i) - shift;
    const double a = (x - 0.4) / sigma;
    const double b = (x - 0.5) / sigma;
    const double c = (x - 0.6) / sigma;
    values(i) = std::exp(-a * a) - std::exp(-b * b) + std::exp(-c * c);
  }
  return values;
}

double euclidean_loss(const Vector& f, const Vector& g) {
  require(f.size() == g.size(), errc::length_mismatch, "signals differ in length");
  return (f - g).norm();
}

double wasserstein_loss(const Vector& f, const Vector& g, const Grid1D& grid) {
  const SplitSignal sf = split_and_normalize(SignedSignal(f));
  const SplitSignal sg = split_and_normalize(SignedSignal(g));
  return w2_1d(sf.pos, sg.pos, grid) + w2_1d(sf.neg, sg.neg, grid);
}

double sinkhorn_loss(const Vector& f, const Vector& g, const Grid1D& grid,
                     SinkhornMode mode, const ExperimentConfig& config) {
  const SplitSignal sf = split_and_normalize(SignedSignal(f));
  const SplitSignal sg = split_and_normalize(SignedSignal(g));
  const SinkhornConfig sc = sinkhorn_config(config);
  if (mode == SinkhornMode::dense) {
    const Matrix cost = cost_matrix_1d(Cost1D::squared_distance(), grid, grid);
    return dense_sinkhorn(sf.pos, sg.pos, cost, sc).value +
           dense_sinkhorn(sf.neg, sg.neg, cost, sc).value;
  }
  const KernelFactorSet factors = build_kernel_factors(
      TensorGrid({grid}), Cost1D::squared_distance(), config.lambda, config.eps_tol,
      config.eta0, config.n_min);
  return hierarchical_sinkhorn(sf.pos, sg.pos, factors, sc).value +
         hierarchical_sinkhorn(sf.neg, sg.neg, factors, sc).value;
}

SweepResult run_sweep(Index n, double sigma, Index num_shifts,
                      const ExperimentConfig& config) {
  require(num_shifts >= 2, errc::invalid_argument, "sweep needs at least two shifts");
  const Grid1D grid(0.0, 1.0, n);
  const SinkhornConfig sc = sinkhorn_config(config);

  const bool with_dense = config.with_dense >= 0 ? config.with_dense != 0 : n <= 4096;

  const Vector f = three_pulse(grid, sigma, 0.0);
  const SplitSignal sf = split_and_normalize(SignedSignal(f));
  const KernelFactorSet factors = build_kernel_factors(
      TensorGrid({grid}), Cost1D::squared_distance(), config.lambda, config.eps_tol,
      config.eta0, config.n_min);
  // The dense reference kernel is built once and shared read-only by every
  // row; rebuilding it per shift would multiply both time and peak memory.
  Matrix q_dense, qhat_dense;
  if (with_dense) {
    const Matrix cost = cost_matrix_1d(Cost1D::squared_distance(), grid, grid);
    q_dense = (-config.lambda * cost).array().exp().matrix();
    qhat_dense = cost.cwiseProduct(q_dense);
  }
  const ApplyFn dense_q = [&q_dense](const Vector& z) { return Vector(q_dense * z); };
  const ApplyFn dense_qt = [&q_dense](const Vector& z) {
    return Vector(q_dense.transpose() * z);
  };
  const ApplyFn dense_qhat = [&qhat_dense](const Vector& z) {
    return Vector(qhat_dense * z);
  };

  SweepResult result;
  result.n = n;
  result.sigma = sigma;
  result.rows.resize(static_cast<std::size_t>(num_shifts));

  const auto run_row = [&](Index row_index) {
    const double shift = -0.3 + 0.6 * static_cast<double>(row_index) /
                                    static_cast<double>(num_shifts - 1);
    const Vector g = three_pulse(grid, sigma, shift);
    SweepRow row;
    row.shift = shift;

    double t0 = now_seconds();
    row.d_e = euclidean_loss(f, g);
    row.seconds_e = now_seconds() - t0;

    const SplitSignal sg = split_and_normalize(SignedSignal(g));

    t0 = now_seconds();
    row.d_w = w2_1d(sf.pos, sg.pos, grid) + w2_1d(sf.neg, sg.neg, grid);
    row.seconds_w = now_seconds() - t0;

    if (with_dense) {
      t0 = now_seconds();
      const SinkhornState pos = sinkhorn_scaling(sf.pos, sg.pos, dense_q, dense_qt, sc);
      const SinkhornState neg = sinkhorn_scaling(sf.neg, sg.neg, dense_q, dense_qt, sc);
      row.d_s = sinkhorn_divergence(pos, dense_qhat, sc.p) +
                sinkhorn_divergence(neg, dense_qhat, sc.p);
      row.seconds_s = now_seconds() - t0;
    } else {
      row.d_s = std::numeric_limits<double>::quiet_NaN();
      row.seconds_s = 0.0;
    }

    t0 = now_seconds();
    row.d_s_h = hierarchical_sinkhorn(sf.pos, sg.pos, factors, sc).value +
                hierarchical_sinkhorn(sf.neg, sg.neg, factors, sc).value;
    row.seconds_s_h = now_seconds() - t0;

    result.rows[static_cast<std::size_t>(row_index)] = row;
  };

  const Index threads = std::max<Index>(1, config.threads);
  if (threads == 1) {
    for (Index i = 0; i < num_shifts; ++i) run_row(i);
  } else {
    // Rows only read shared state (factors, cost, f), so they can run in
    // parallel; interleaved assignment balances the per-shift iteration load.
    std::vector<std::future<void>> futures;
    futures.reserve(static_cast<std::size_t>(threads));
    for (Index t = 0; t < threads; ++t) {
      futures.push_back(std::async(std::launch::async, [&, t]() {
        for (Index i = t; i < num_shifts; i += threads) run_row(i);
      }));
    }
    for (auto& future : futures) future.get();
  }
  return result;
}

void write_sweep_csv(const SweepResult& result, const std::string& path) {
  std::string text = "shift,d_E,d_W,d_S,d_S_H\n";
  char buf[160];
  for (const SweepRow& row : result.rows) {
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g,%.17g\n", row.shift, row.d_e,
                  row.d_w, row.d_s, row.d_s_h);
    text += buf;
  }
  write_text_file(path, text);
}

double hierarchical_eval_seconds(Index n, double sigma, const ExperimentConfig& config) {
  const Grid1D grid(0.0, 1.0, n);
  const SinkhornConfig sc = sinkhorn_config(config);
  const ProbabilityVector f = split_and_normalize(SignedSignal(three_pulse(grid, sigma, 0.0))).pos;
  const ProbabilityVector g = split_and_normalize(SignedSignal(three_pulse(grid, sigma, 0.1))).pos;
  const double t0 = now_seconds();
  const KernelFactorSet factors = build_kernel_factors(
      TensorGrid({grid}), Cost1D::squared_distance(), config.lambda, config.eps_tol,
      config.eta0, config.n_min);
  const DivergenceResult result = hierarchical_sinkhorn(f, g, factors, sc);
  const double elapsed = now_seconds() - t0;
  require(std::isfinite(result.value), errc::invalid_argument, "divergence is nonfinite");
  return elapsed;
}

double dense_eval_seconds(Index n, double sigma, const ExperimentConfig& config) {
  const Grid1D grid(0.0, 1.0, n);
  const SinkhornConfig sc = sinkhorn_config(config);
  const ProbabilityVector f = split_and_normalize(SignedSignal(three_pulse(grid, sigma, 0.0))).pos;
  const ProbabilityVector g = split_and_normalize(SignedSignal(three_pulse(grid, sigma, 0.1))).pos;
  const double t0 = now_seconds();
  const Matrix cost = cost_matrix_1d(Cost1D::squared_distance(), grid, grid);
  const DivergenceResult result = dense_sinkhorn(f, g, cost, sc);
  const double elapsed = now_seconds() - t0;
  require(std::isfinite(result.value), errc::invalid_argument, "divergence is nonfinite");
  return elapsed;
}

std::vector<BenchRow> bench_scaling(const std::vector<Index>& n_list, double sigma,
                                    int reps, const ExperimentConfig& config) {
  require(!n_list.empty(), errc::invalid_argument, "benchmark needs at least one size");
  const int repetitions = std::max(3, reps);
  std::vector<BenchRow> rows;
  rows.reserve(n_list.size());
  for (Index n : n_list) {
    std::vector<double> times(static_cast<std::size_t>(repetitions));
    for (int r = 0; r < repetitions; ++r)
      times[static_cast<std::size_t>(r)] = hierarchical_eval_seconds(n, sigma, config);
    auto mid = times.begin() + times.size() / 2;
    std::nth_element(times.begin(), mid, times.end());
    rows.push_back(BenchRow{n, *mid, repetitions});
  }
  return rows;
}

void write_bench_csv(const std::vector<BenchRow>& rows, const std::string& path) {
  std::string text = "n,seconds,repetitions\n";
  char buf[96];
  for (const BenchRow& row : rows) {
    std::snprintf(buf, sizeof(buf), "%lld,%.17g,%d\n", static_cast<long long>(row.n),
                  row.seconds, row.repetitions);
    text += buf;
  }
  write_text_file(path, text);
}

} // namespace sinkdiv
