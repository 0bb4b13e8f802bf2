//
// Project     : sinkdiv
// Module      : c api
//

#include "sinkdiv.h"

#include "sinkdiv/core.hpp"
#include "sinkdiv/experiment.hpp"
#include "sinkdiv/kron.hpp"
#include "sinkdiv/sinkhorn.hpp"
#include "sinkdiv/wasserstein1d.hpp"

#include <cstring>
#include <exception>
#include <fstream>
#include <new>
#include <string>
#include <vector>

namespace {

thread_local std::string g_last_error;

sinkdiv_status status_of(sinkdiv::errc code) {
  using sinkdiv::errc;
  switch (code) {
    case errc::invalid_argument: return SINKDIV_ERR_INVALID_ARGUMENT;
    case errc::length_mismatch: return SINKDIV_ERR_LENGTH_MISMATCH;
    case errc::zero_mass_part: return SINKDIV_ERR_ZERO_MASS_PART;
    case errc::out_of_range: return SINKDIV_ERR_OUT_OF_RANGE;
    case errc::bad_size: return SINKDIV_ERR_BAD_SIZE;
    case errc::unknown_smoothness: return SINKDIV_ERR_UNKNOWN_SMOOTHNESS;
    case errc::divergent_rank: return SINKDIV_ERR_DIVERGENT_RANK;
    case errc::nonpositive_denominator: return SINKDIV_ERR_NONPOSITIVE_DENOMINATOR;
    case errc::max_iter_exceeded: return SINKDIV_ERR_MAX_ITER_EXCEEDED;
    case errc::io_error: return SINKDIV_ERR_IO;
  }
  return SINKDIV_ERR_INTERNAL;
}

template <typename Fn>
sinkdiv_status guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return SINKDIV_OK;
  } catch (const sinkdiv::error& e) {
    g_last_error = e.what();
    return status_of(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return SINKDIV_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return SINKDIV_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown failure";
    return SINKDIV_ERR_INTERNAL;
  }
}

void check_ptr(const void* p, const char* what) {
  sinkdiv::require(p != nullptr, sinkdiv::errc::invalid_argument,
                   std::string(what) + " is null");
}

sinkdiv::TensorGrid make_grid(const int64_t* nk, int64_t d) {
  check_ptr(nk, "axis size list");
  sinkdiv::require(d >= 1 && d <= SINKDIV_MAX_AXES, sinkdiv::errc::invalid_argument,
                   "dimension must be in [1, 8]");
  std::vector<sinkdiv::Grid1D> axes;
  axes.reserve(static_cast<std::size_t>(d));
  for (int64_t k = 0; k < d; ++k) axes.emplace_back(0.0, 1.0, nk[k]);
  return sinkdiv::TensorGrid(std::move(axes));
}

sinkdiv::SinkhornConfig make_sinkhorn_config(const sinkdiv_config& c) {
  sinkdiv::SinkhornConfig sc;
  sc.lambda = c.lambda;
  sc.p = c.p;
  sc.eps_s = c.eps_s;
  sc.max_iter = static_cast<long>(c.max_iter);
  return sc;
}

sinkdiv::Cost1D make_cost(const sinkdiv_config& c) {
  return sinkdiv::Cost1D::power_distance(c.p);
}

sinkdiv::ProbabilityVector make_probability(const double* data, int64_t n,
                                            const char* what) {
  check_ptr(data, what);
  sinkdiv::require(n >= 1, sinkdiv::errc::invalid_argument, "vector length must be >= 1");
  return sinkdiv::ProbabilityVector(
      Eigen::Map<const sinkdiv::Vector>(data, static_cast<sinkdiv::Index>(n)));
}

} // namespace

struct sinkdiv_plan {
  sinkdiv::TensorGrid grid;
  sinkdiv::KernelFactorSet factors;
  sinkdiv::SinkhornConfig sinkhorn;
};

extern "C" {

const char* sinkdiv_status_name(sinkdiv_status status) {
  switch (status) {
    case SINKDIV_OK: return "ok";
    case SINKDIV_ERR_INVALID_ARGUMENT: return "invalid_argument";
    case SINKDIV_ERR_LENGTH_MISMATCH: return "length_mismatch";
    case SINKDIV_ERR_ZERO_MASS_PART: return "zero_mass_part";
    case SINKDIV_ERR_OUT_OF_RANGE: return "out_of_range";
    case SINKDIV_ERR_BAD_SIZE: return "bad_size";
    case SINKDIV_ERR_UNKNOWN_SMOOTHNESS: return "unknown_smoothness";
    case SINKDIV_ERR_DIVERGENT_RANK: return "divergent_rank";
    case SINKDIV_ERR_NONPOSITIVE_DENOMINATOR: return "nonpositive_denominator";
    case SINKDIV_ERR_MAX_ITER_EXCEEDED: return "max_iter_exceeded";
    case SINKDIV_ERR_IO: return "io_error";
    case SINKDIV_ERR_INTERNAL: return "internal";
  }
  return "unknown";
}

int sinkdiv_exit_code(sinkdiv_status status) {
  switch (status) {
    case SINKDIV_OK:
      return 0;
    case SINKDIV_ERR_INVALID_ARGUMENT:
    case SINKDIV_ERR_LENGTH_MISMATCH:
    case SINKDIV_ERR_ZERO_MASS_PART:
    case SINKDIV_ERR_OUT_OF_RANGE:
    case SINKDIV_ERR_BAD_SIZE:
    case SINKDIV_ERR_UNKNOWN_SMOOTHNESS:
      return 2;
    case SINKDIV_ERR_MAX_ITER_EXCEEDED:
      return 3;
    case SINKDIV_ERR_DIVERGENT_RANK:
    case SINKDIV_ERR_NONPOSITIVE_DENOMINATOR:
      return 4;
    case SINKDIV_ERR_IO:
      return 5;
    case SINKDIV_ERR_INTERNAL:
      return 1;
  }
  return 1;
}

const char* sinkdiv_last_error(void) { return g_last_error.c_str(); }

const char* sinkdiv_version(void) { return SINKDIV_VERSION; }

sinkdiv_config sinkdiv_config_default(void) {
  sinkdiv_config c;
  c.lambda = 50.0;
  c.p = 2.0;
  c.eps_tol = 0.01;
  c.eps_s = 0.01;
  c.eta0 = 1.0;
  c.n_min = 32;
  c.max_iter = 10000;
  return c;
}

sinkdiv_status sinkdiv_plan_create(const int64_t* nk, int64_t d,
                                   const sinkdiv_config* config, sinkdiv_plan** out) {
  return guarded([&] {
    check_ptr(config, "config");
    check_ptr(out, "output handle");
    *out = nullptr;
    sinkdiv::TensorGrid grid = make_grid(nk, d);
    sinkdiv::KernelFactorSet factors = sinkdiv::build_kernel_factors(
        grid, make_cost(*config), config->lambda, config->eps_tol, config->eta0,
        static_cast<sinkdiv::Index>(config->n_min));
    *out = new sinkdiv_plan{std::move(grid), std::move(factors),
                            make_sinkhorn_config(*config)};
  });
}

void sinkdiv_plan_destroy(sinkdiv_plan* plan) { delete plan; }

int64_t sinkdiv_plan_size(const sinkdiv_plan* plan) {
  return plan == nullptr ? 0 : static_cast<int64_t>(plan->grid.size());
}

sinkdiv_status sinkdiv_plan_divergence(const sinkdiv_plan* plan, const double* f,
                                       const double* g, int64_t n, double* value,
                                       int64_t* iterations, double* residual) {
  return guarded([&] {
    check_ptr(plan, "plan");
    check_ptr(value, "value output");
    sinkdiv::require(n == static_cast<int64_t>(plan->grid.size()),
                     sinkdiv::errc::length_mismatch,
                     "vector length does not match the plan");
    const sinkdiv::ProbabilityVector pf = make_probability(f, n, "f");
    const sinkdiv::ProbabilityVector pg = make_probability(g, n, "g");
    const sinkdiv::DivergenceResult result =
        sinkdiv::hierarchical_sinkhorn(pf, pg, plan->factors, plan->sinkhorn);
    *value = result.value;
    if (iterations != nullptr) *iterations = result.state.iterations;
    if (residual != nullptr) *residual = result.state.residual;
  });
}

sinkdiv_status sinkdiv_plan_dump_partition(const sinkdiv_plan* plan, int64_t axis,
                                           int hat, const char* path) {
  return guarded([&] {
    check_ptr(plan, "plan");
    check_ptr(path, "path");
    sinkdiv::require(axis >= 1 && axis <= static_cast<int64_t>(plan->grid.dim()),
                     sinkdiv::errc::out_of_range, "axis must be in [1, d]");
    const sinkdiv::FactorList& list = hat ? plan->factors.qhat : plan->factors.q;
    const sinkdiv::Factor& factor = list[static_cast<std::size_t>(axis - 1)];
    sinkdiv::require(factor.is_hierarchical(), sinkdiv::errc::invalid_argument,
                     "factor is not hierarchical");
    std::ofstream out(path);
    sinkdiv::require(out.good(), sinkdiv::errc::io_error,
                     std::string("cannot open ") + path + " for writing");
    factor.hierarchical().write_leaves_csv(out);
    sinkdiv::require(out.good(), sinkdiv::errc::io_error,
                     std::string("write failed for ") + path);
  });
}

sinkdiv_status sinkdiv_dense_divergence(const int64_t* nk, int64_t d,
                                        const sinkdiv_config* config, const double* f,
                                        const double* g, int64_t n, double* value,
                                        int64_t* iterations, double* residual) {
  return guarded([&] {
    check_ptr(config, "config");
    check_ptr(value, "value output");
    const sinkdiv::TensorGrid grid = make_grid(nk, d);
    sinkdiv::require(n == static_cast<int64_t>(grid.size()),
                     sinkdiv::errc::length_mismatch,
                     "vector length does not match the grid");
    sinkdiv::require(n <= 8192, sinkdiv::errc::invalid_argument,
                     "dense path is limited to n <= 8192");
    const sinkdiv::ProbabilityVector pf = make_probability(f, n, "f");
    const sinkdiv::ProbabilityVector pg = make_probability(g, n, "g");
    const sinkdiv::Matrix cost = sinkdiv::cost_matrix(make_cost(*config), grid);
    const sinkdiv::DivergenceResult result =
        sinkdiv::dense_sinkhorn(pf, pg, cost, make_sinkhorn_config(*config));
    *value = result.value;
    if (iterations != nullptr) *iterations = result.state.iterations;
    if (residual != nullptr) *residual = result.state.residual;
  });
}

sinkdiv_status sinkdiv_w2(const double* f, const double* g, int64_t n, double* value) {
  return guarded([&] {
    check_ptr(value, "value output");
    sinkdiv::require(n >= 2, sinkdiv::errc::invalid_argument,
                     "grid needs at least two points");
    const sinkdiv::Grid1D grid(0.0, 1.0, static_cast<sinkdiv::Index>(n));
    const sinkdiv::ProbabilityVector pf = make_probability(f, n, "f");
    const sinkdiv::ProbabilityVector pg = make_probability(g, n, "g");
    *value = sinkdiv::w2_1d(pf, pg, grid);
  });
}

sinkdiv_status sinkdiv_split_normalize(const double* signal, int64_t n, double* pos,
                                       double* neg, double* pos_mass, double* neg_mass) {
  return guarded([&] {
    check_ptr(signal, "signal");
    check_ptr(pos, "pos output");
    check_ptr(neg, "neg output");
    sinkdiv::require(n >= 1, sinkdiv::errc::invalid_argument,
                     "vector length must be >= 1");
    const sinkdiv::SignedSignal s(
        Eigen::Map<const sinkdiv::Vector>(signal, static_cast<sinkdiv::Index>(n)));
    const sinkdiv::SplitSignal split = sinkdiv::split_and_normalize(s);
    Eigen::Map<sinkdiv::Vector>(pos, static_cast<sinkdiv::Index>(n)) = split.pos.values();
    Eigen::Map<sinkdiv::Vector>(neg, static_cast<sinkdiv::Index>(n)) = split.neg.values();
    if (pos_mass != nullptr) *pos_mass = split.pos_mass;
    if (neg_mass != nullptr) *neg_mass = split.neg_mass;
  });
}

sinkdiv_status sinkdiv_read_vector(const char* path, double** values, int64_t* n,
                                   int64_t* d, int64_t* nk) {
  return guarded([&] {
    check_ptr(path, "path");
    check_ptr(values, "values output");
    check_ptr(n, "n output");
    check_ptr(d, "d output");
    check_ptr(nk, "nk output");
    const sinkdiv::VectorCsv csv = sinkdiv::read_vector_csv(path);
    sinkdiv::require(csv.d <= SINKDIV_MAX_AXES, sinkdiv::errc::io_error,
                     std::string(path) + ": dimension exceeds the axis limit");
    double* data = static_cast<double*>(
        ::operator new(static_cast<std::size_t>(csv.values.size()) * sizeof(double)));
    std::memcpy(data, csv.values.data(),
                static_cast<std::size_t>(csv.values.size()) * sizeof(double));
    *values = data;
    *n = static_cast<int64_t>(csv.values.size());
    *d = static_cast<int64_t>(csv.d);
    for (std::size_t k = 0; k < csv.nk.size(); ++k)
      nk[k] = static_cast<int64_t>(csv.nk[k]);
  });
}

sinkdiv_status sinkdiv_write_vector(const char* path, const double* values, int64_t n,
                                    int64_t d, const int64_t* nk) {
  return guarded([&] {
    check_ptr(path, "path");
    check_ptr(values, "values");
    check_ptr(nk, "nk");
    sinkdiv::require(n >= 1 && d >= 1, sinkdiv::errc::invalid_argument,
                     "n and d must be >= 1");
    std::vector<sinkdiv::Index> sizes;
    sizes.reserve(static_cast<std::size_t>(d));
    for (int64_t k = 0; k < d; ++k) sizes.push_back(static_cast<sinkdiv::Index>(nk[k]));
    sinkdiv::write_vector_csv(
        path, Eigen::Map<const sinkdiv::Vector>(values, static_cast<sinkdiv::Index>(n)),
        static_cast<sinkdiv::Index>(d), sizes);
  });
}

void sinkdiv_free(double* values) { ::operator delete(values); }

sinkdiv_status sinkdiv_sweep(const sinkdiv_sweep_params* params,
                             const sinkdiv_config* config, const char* out_csv) {
  return guarded([&] {
    check_ptr(params, "params");
    check_ptr(config, "config");
    check_ptr(out_csv, "output path");
    sinkdiv::ExperimentConfig ec;
    ec.lambda = config->lambda;
    ec.p = config->p;
    ec.eps_tol = config->eps_tol;
    ec.eps_s = config->eps_s;
    ec.eta0 = config->eta0;
    ec.n_min = static_cast<sinkdiv::Index>(config->n_min);
    ec.max_iter = static_cast<long>(config->max_iter);
    ec.threads = params->threads;
    ec.with_dense = params->with_dense;
    const sinkdiv::SweepResult result =
        sinkdiv::run_sweep(static_cast<sinkdiv::Index>(params->n), params->sigma,
                           static_cast<sinkdiv::Index>(params->num_shifts), ec);
    sinkdiv::write_sweep_csv(result, out_csv);
  });
}

sinkdiv_status sinkdiv_bench(const int64_t* n_list, int64_t count, double sigma,
                             int reps, const sinkdiv_config* config,
                             const char* out_csv) {
  return guarded([&] {
    check_ptr(n_list, "size list");
    check_ptr(config, "config");
    check_ptr(out_csv, "output path");
    sinkdiv::require(count >= 1, sinkdiv::errc::invalid_argument,
                     "benchmark needs at least one size");
    sinkdiv::ExperimentConfig ec;
    ec.lambda = config->lambda;
    ec.p = config->p;
    ec.eps_tol = config->eps_tol;
    ec.eps_s = config->eps_s;
    ec.eta0 = config->eta0;
    ec.n_min = static_cast<sinkdiv::Index>(config->n_min);
    ec.max_iter = static_cast<long>(config->max_iter);
    std::vector<sinkdiv::Index> sizes;
    sizes.reserve(static_cast<std::size_t>(count));
    for (int64_t k = 0; k < count; ++k)
      sizes.push_back(static_cast<sinkdiv::Index>(n_list[k]));
    const std::vector<sinkdiv::BenchRow> rows =
        sinkdiv::bench_scaling(sizes, sigma, reps, ec);
    sinkdiv::write_bench_csv(rows, out_csv);
  });
}

} // extern "C"
