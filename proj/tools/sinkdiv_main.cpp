//
// Project     : sinkdiv
// Module      : cli
// Description : command-line front end over the shared-library C interface
//

#include "sinkdiv.h"

#include <CLI11.hpp>

#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

namespace {

struct CommonOptions {
  sinkdiv_config config = sinkdiv_config_default();
};

void add_config_flags(CLI::App* cmd, CommonOptions* opts) {
  cmd->add_option("--lambda", opts->config.lambda, "Regularization strength (> 0)")
      ->capture_default_str();
  cmd->add_option("--p", opts->config.p, "Cost exponent and divergence root")
      ->capture_default_str();
  cmd->add_option("--eps-tol", opts->config.eps_tol,
                  "Hierarchical approximation tolerance")
      ->capture_default_str();
  cmd->add_option("--eps-s", opts->config.eps_s, "Scaling stopping tolerance")
      ->capture_default_str();
  cmd->add_option("--eta0", opts->config.eta0, "Block admissibility threshold")
      ->capture_default_str();
  cmd->add_option("--n-min", opts->config.n_min,
                  "Minimal block size; axis sizes must be n-min times a power of two")
      ->capture_default_str();
  cmd->add_option("--max-iter", opts->config.max_iter, "Scaling iteration cap")
      ->capture_default_str();
}

int fail_with(sinkdiv_status status) {
  std::fprintf(stderr, "error: %s\n", sinkdiv_last_error());
  return sinkdiv_exit_code(status);
}

struct OwnedVector {
  double* data = nullptr;
  int64_t n = 0;
  int64_t d = 1;
  int64_t nk[SINKDIV_MAX_AXES] = {0};

  ~OwnedVector() { sinkdiv_free(data); }
};

sinkdiv_status load_vector(const std::string& path, OwnedVector* out) {
  return sinkdiv_read_vector(path.c_str(), &out->data, &out->n, &out->d, out->nk);
}

int run_divergence(const CommonOptions& opts, const std::string& f_path,
                   const std::string& g_path, const std::string& mode,
                   const std::vector<int64_t>& nk_override,
                   const std::string& dump_path) {
  OwnedVector f, g;
  sinkdiv_status status = load_vector(f_path, &f);
  if (status != SINKDIV_OK) return fail_with(status);
  status = load_vector(g_path, &g);
  if (status != SINKDIV_OK) return fail_with(status);

  int64_t d = f.d;
  const int64_t* nk = f.nk;
  int64_t nk_buf[SINKDIV_MAX_AXES] = {0};
  if (!nk_override.empty()) {
    if (nk_override.size() > SINKDIV_MAX_AXES) {
      std::fprintf(stderr, "error: --nk accepts at most %d axes\n", SINKDIV_MAX_AXES);
      return 2;
    }
    int64_t prod = 1;
    for (std::size_t k = 0; k < nk_override.size(); ++k) {
      nk_buf[k] = nk_override[k];
      prod *= nk_override[k];
    }
    if (prod != f.n) {
      std::fprintf(stderr, "error: --nk sizes multiply to %lld, input has %lld values\n",
                   static_cast<long long>(prod), static_cast<long long>(f.n));
      return 2;
    }
    d = static_cast<int64_t>(nk_override.size());
    nk = nk_buf;
  }
  if (g.n != f.n) {
    std::fprintf(stderr, "error: f has %lld values, g has %lld\n",
                 static_cast<long long>(f.n), static_cast<long long>(g.n));
    return 2;
  }

  double value = 0.0;
  int64_t iterations = 0;
  double residual = 0.0;
  if (mode == "dense") {
    if (!dump_path.empty()) {
      std::fprintf(stderr, "error: --dump-partition requires --mode hier\n");
      return 2;
    }
    status = sinkdiv_dense_divergence(nk, d, &opts.config, f.data, g.data, f.n, &value,
                                      &iterations, &residual);
    if (status != SINKDIV_OK) return fail_with(status);
  } else {
    sinkdiv_plan* plan = nullptr;
    status = sinkdiv_plan_create(nk, d, &opts.config, &plan);
    if (status != SINKDIV_OK) return fail_with(status);
    if (!dump_path.empty()) {
      status = sinkdiv_plan_dump_partition(plan, 1, 0, dump_path.c_str());
      if (status != SINKDIV_OK) {
        sinkdiv_plan_destroy(plan);
        return fail_with(status);
      }
    }
    status = sinkdiv_plan_divergence(plan, f.data, g.data, f.n, &value, &iterations,
                                     &residual);
    sinkdiv_plan_destroy(plan);
    if (status != SINKDIV_OK) return fail_with(status);
  }

  std::printf("S = %.17g\n", value);
  std::printf("iterations = %lld\n", static_cast<long long>(iterations));
  std::printf("residual = %.17g\n", residual);
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Entropically regularized transport divergence on tensor-product grids"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(sinkdiv_version()));

  CommonOptions div_opts;
  std::string f_path, g_path;
  std::string mode = "hier";
  std::vector<int64_t> nk_override;
  std::string dump_path;
  CLI::App* divergence =
      app.add_subcommand("divergence", "Divergence between two probability vectors");
  divergence->add_option("--f", f_path, "Csv with the first probability vector")
      ->required();
  divergence->add_option("--g", g_path, "Csv with the second probability vector")
      ->required();
  divergence->add_option("--mode", mode, "Kernel representation")
      ->check(CLI::IsMember({"dense", "hier"}))
      ->capture_default_str();
  divergence->add_option("--nk", nk_override,
                         "Axis sizes overriding the csv metadata (axis 1 first)")
      ->delimiter(',');
  divergence->add_option("--dump-partition", dump_path,
                         "Write the axis-1 kernel block partition to this csv");
  add_config_flags(divergence, &div_opts);

  CommonOptions sweep_opts;
  sinkdiv_sweep_params sweep_params;
  sweep_params.sigma = 0.05;
  sweep_params.n = 4096;
  sweep_params.num_shifts = 61;
  sweep_params.threads = 1;
  sweep_params.with_dense = -1;
  std::string sweep_out;
  CLI::App* sweep = app.add_subcommand("sweep", "Three-pulse shift sweep of the losses");
  sweep->add_option("--n", sweep_params.n, "Grid size")->capture_default_str();
  sweep->add_option("--sigma", sweep_params.sigma, "Pulse width")->capture_default_str();
  sweep->add_option("--shifts", sweep_params.num_shifts, "Number of shifts in [-0.3, 0.3]")
      ->capture_default_str();
  sweep->add_option("--threads", sweep_params.threads, "Worker threads over the shifts")
      ->capture_default_str();
  // Two plain flags instead of one int-bound flag: CLI11 writes 0 into a
  // bound int when neither alias is given, which would erase the auto mode.
  CLI::Option* with_dense_flag =
      sweep->add_flag("--with-dense", "Force the dense reference column");
  CLI::Option* no_dense_flag = sweep->add_flag(
      "--no-dense", "Drop the dense reference column (default: on up to n = 4096)");
  with_dense_flag->excludes(no_dense_flag);
  sweep->add_option("--out", sweep_out, "Output csv path")->required();
  add_config_flags(sweep, &sweep_opts);

  CommonOptions bench_opts;
  std::vector<int64_t> bench_sizes;
  double bench_sigma = 0.05;
  int bench_reps = 3;
  std::string bench_out;
  CLI::App* bench = app.add_subcommand("bench", "Wall-time scaling of the fast path");
  bench->add_option("--n", bench_sizes, "Grid sizes to time")->required()->delimiter(',');
  bench->add_option("--sigma", bench_sigma, "Pulse width")->capture_default_str();
  bench->add_option("--reps", bench_reps, "Repetitions per size (median reported)")
      ->capture_default_str();
  bench->add_option("--out", bench_out, "Output csv path")->required();
  add_config_flags(bench, &bench_opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }

  if (divergence->parsed())
    return run_divergence(div_opts, f_path, g_path, mode, nk_override, dump_path);

  if (sweep->parsed()) {
    if (with_dense_flag->count() > 0) sweep_params.with_dense = 1;
    if (no_dense_flag->count() > 0) sweep_params.with_dense = 0;
    const sinkdiv_status status =
        sinkdiv_sweep(&sweep_params, &sweep_opts.config, sweep_out.c_str());
    if (status != SINKDIV_OK) return fail_with(status);
    std::printf("wrote %s\n", sweep_out.c_str());
    return 0;
  }

  const sinkdiv_status status =
      sinkdiv_bench(bench_sizes.data(), static_cast<int64_t>(bench_sizes.size()),
                    bench_sigma, bench_reps, &bench_opts.config, bench_out.c_str());
  if (status != SINKDIV_OK) return fail_with(status);
  std::printf("wrote %s\n", bench_out.c_str());
  return 0;
}
