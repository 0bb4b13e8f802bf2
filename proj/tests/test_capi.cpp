//
// Project     : sinkdiv
// Module      : c api tests
//

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "sinkdiv.h"

#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace {

std::string temp_path(const char* name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

std::vector<double> bump(int64_t n, double center, double width) {
  std::vector<double> v(static_cast<size_t>(n));
  double total = 0.0;
  for (int64_t i = 0; i < n; ++i) {
    const double x = double(i) / double(n - 1);
    v[size_t(i)] = std::exp(-std::pow((x - center) / width, 2));
    total += v[size_t(i)];
  }
  for (double& value : v) value /= total;
  return v;
}

} // namespace

TEST_CASE("version and status names are stable") {
  CHECK(std::strcmp(sinkdiv_version(), "1.0.0") == 0);
  CHECK(std::strcmp(sinkdiv_status_name(SINKDIV_OK), "ok") == 0);
  CHECK(std::strcmp(sinkdiv_status_name(SINKDIV_ERR_BAD_SIZE), "bad_size") == 0);
  CHECK(std::strcmp(sinkdiv_status_name(SINKDIV_ERR_MAX_ITER_EXCEEDED),
                    "max_iter_exceeded") == 0);
}

TEST_CASE("exit codes group statuses into failure classes") {
  CHECK(sinkdiv_exit_code(SINKDIV_OK) == 0);
  CHECK(sinkdiv_exit_code(SINKDIV_ERR_INVALID_ARGUMENT) == 2);
  CHECK(sinkdiv_exit_code(SINKDIV_ERR_LENGTH_MISMATCH) == 2);
  CHECK(sinkdiv_exit_code(SINKDIV_ERR_ZERO_MASS_PART) == 2);
  CHECK(sinkdiv_exit_code(SINKDIV_ERR_OUT_OF_RANGE) == 2);
  CHECK(sinkdiv_exit_code(SINKDIV_ERR_BAD_SIZE) == 2);
  CHECK(sinkdiv_exit_code(SINKDIV_ERR_UNKNOWN_SMOOTHNESS) == 2);
  CHECK(sinkdiv_exit_code(SINKDIV_ERR_MAX_ITER_EXCEEDED) == 3);
  CHECK(sinkdiv_exit_code(SINKDIV_ERR_DIVERGENT_RANK) == 4);
  CHECK(sinkdiv_exit_code(SINKDIV_ERR_NONPOSITIVE_DENOMINATOR) == 4);
  CHECK(sinkdiv_exit_code(SINKDIV_ERR_IO) == 5);
  CHECK(sinkdiv_exit_code(SINKDIV_ERR_INTERNAL) == 1);
}

TEST_CASE("the default configuration matches its documentation") {
  const sinkdiv_config c = sinkdiv_config_default();
  CHECK(c.lambda == 50.0);
  CHECK(c.p == 2.0);
  CHECK(c.eps_tol == 0.01);
  CHECK(c.eps_s == 0.01);
  CHECK(c.eta0 == 1.0);
  CHECK(c.n_min == 32);
  CHECK(c.max_iter == 10000);
}

TEST_CASE("plans compute a divergence that dominates the transport distance") {
  const int64_t nk[1] = {128};
  const sinkdiv_config config = sinkdiv_config_default();
  sinkdiv_plan* plan = nullptr;
  REQUIRE(sinkdiv_plan_create(nk, 1, &config, &plan) == SINKDIV_OK);
  REQUIRE(plan != nullptr);
  CHECK(sinkdiv_plan_size(plan) == 128);

  const std::vector<double> f = bump(128, 0.35, 0.06);
  const std::vector<double> g = bump(128, 0.62, 0.06);
  double s_hier = 0.0, s_dense = 0.0, w = 0.0, residual = -1.0;
  int64_t iterations = -1;
  CHECK(sinkdiv_plan_divergence(plan, f.data(), g.data(), 128, &s_hier, &iterations,
                                &residual) == SINKDIV_OK);
  CHECK(iterations >= 1);
  CHECK(residual >= 0.0);
  CHECK(residual <= config.eps_s);
  CHECK(sinkdiv_dense_divergence(nk, 1, &config, f.data(), g.data(), 128, &s_dense,
                                 nullptr, nullptr) == SINKDIV_OK);
  CHECK(sinkdiv_w2(f.data(), g.data(), 128, &w) == SINKDIV_OK);
  CHECK(s_hier >= w - 1e-9);
  CHECK(s_dense >= w - 1e-9);
  CHECK(std::abs(s_hier - s_dense) <= 0.05);

  const std::string dump = temp_path("sinkdiv_capi_partition.csv");
  CHECK(sinkdiv_plan_dump_partition(plan, 1, 0, dump.c_str()) == SINKDIV_OK);
  std::ifstream in(dump);
  std::string header;
  std::getline(in, header);
  CHECK(header == "row_start,row_end,col_start,col_end,kind,rank");
  in.close();
  std::filesystem::remove(dump);

  CHECK(sinkdiv_plan_dump_partition(plan, 2, 0, dump.c_str()) ==
        SINKDIV_ERR_OUT_OF_RANGE);

  sinkdiv_plan_destroy(plan);
  sinkdiv_plan_destroy(nullptr);
}

TEST_CASE("invalid plan requests report their failure class") {
  const sinkdiv_config config = sinkdiv_config_default();
  sinkdiv_plan* plan = nullptr;

  // 100 is not 32 * 2^m.
  const int64_t bad_nk[1] = {100};
  CHECK(sinkdiv_plan_create(bad_nk, 1, &config, &plan) == SINKDIV_ERR_BAD_SIZE);
  CHECK(std::strlen(sinkdiv_last_error()) > 0);

  const int64_t nk[1] = {64};
  CHECK(sinkdiv_plan_create(nullptr, 1, &config, &plan) ==
        SINKDIV_ERR_INVALID_ARGUMENT);
  CHECK(sinkdiv_plan_create(nk, 0, &config, &plan) == SINKDIV_ERR_INVALID_ARGUMENT);
  CHECK(sinkdiv_plan_create(nk, 1, nullptr, &plan) == SINKDIV_ERR_INVALID_ARGUMENT);

  // No smoothness constants exist away from p = 2.
  sinkdiv_config odd = config;
  odd.p = 1.5;
  CHECK(sinkdiv_plan_create(nk, 1, &odd, &plan) == SINKDIV_ERR_UNKNOWN_SMOOTHNESS);

  REQUIRE(sinkdiv_plan_create(nk, 1, &config, &plan) == SINKDIV_OK);
  const std::vector<double> f = bump(64, 0.4, 0.08);
  const std::vector<double> g = bump(64, 0.6, 0.08);
  double value = 0.0;
  CHECK(sinkdiv_plan_divergence(plan, f.data(), g.data(), 32, &value, nullptr,
                                nullptr) == SINKDIV_ERR_LENGTH_MISMATCH);
  std::vector<double> not_probability = f;
  not_probability[0] += 1.0;
  CHECK(sinkdiv_plan_divergence(plan, not_probability.data(), g.data(), 64, &value,
                                nullptr, nullptr) == SINKDIV_ERR_INVALID_ARGUMENT);

  // A fresh successful call clears the sticky message.
  CHECK(sinkdiv_plan_divergence(plan, f.data(), g.data(), 64, &value, nullptr,
                                nullptr) == SINKDIV_OK);
  CHECK(std::strlen(sinkdiv_last_error()) == 0);
  sinkdiv_plan_destroy(plan);
}

TEST_CASE("convergence failures surface through the status") {
  const int64_t nk[1] = {64};
  sinkdiv_config config = sinkdiv_config_default();
  config.lambda = 200.0;
  config.eps_s = 1e-15;
  config.max_iter = 1;
  const std::vector<double> f = bump(64, 0.3, 0.04);
  const std::vector<double> g = bump(64, 0.7, 0.04);
  double value = 0.0;
  CHECK(sinkdiv_dense_divergence(nk, 1, &config, f.data(), g.data(), 64, &value,
                                 nullptr, nullptr) == SINKDIV_ERR_MAX_ITER_EXCEEDED);
}

TEST_CASE("the dense path refuses oversized problems") {
  const int64_t nk[1] = {16384};
  const sinkdiv_config config = sinkdiv_config_default();
  std::vector<double> uniform(16384, 1.0 / 16384.0);
  double value = 0.0;
  CHECK(sinkdiv_dense_divergence(nk, 1, &config, uniform.data(), uniform.data(), 16384,
                                 &value, nullptr, nullptr) ==
        SINKDIV_ERR_INVALID_ARGUMENT);
}

TEST_CASE("sign splitting normalizes both parts") {
  const double signal[4] = {0.5, -1.0, 1.5, -3.0};
  double pos[4], neg[4], pos_mass = 0.0, neg_mass = 0.0;
  REQUIRE(sinkdiv_split_normalize(signal, 4, pos, neg, &pos_mass, &neg_mass) ==
          SINKDIV_OK);
  CHECK(pos_mass == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(neg_mass == doctest::Approx(4.0).epsilon(1e-15));
  CHECK(pos[0] == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(pos[2] == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(neg[1] == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(neg[3] == doctest::Approx(0.75).epsilon(1e-15));

  const double one_signed[3] = {1.0, 2.0, 3.0};
  double p3[3], n3[3];
  CHECK(sinkdiv_split_normalize(one_signed, 3, p3, n3, nullptr, nullptr) ==
        SINKDIV_ERR_ZERO_MASS_PART);
}

TEST_CASE("vector files round-trip through the reader") {
  const std::string path = temp_path("sinkdiv_capi_vec.csv");
  const double values[6] = {0.125, 0.125, 0.25, 0.25, 0.125, 0.125};
  const int64_t shape[2] = {2, 3};
  REQUIRE(sinkdiv_write_vector(path.c_str(), values, 6, 2, shape) == SINKDIV_OK);

  double* back = nullptr;
  int64_t n = 0, d = 0, nk[SINKDIV_MAX_AXES] = {0};
  REQUIRE(sinkdiv_read_vector(path.c_str(), &back, &n, &d, nk) == SINKDIV_OK);
  CHECK(n == 6);
  CHECK(d == 2);
  CHECK(nk[0] == 2);
  CHECK(nk[1] == 3);
  for (int64_t i = 0; i < 6; ++i) CHECK(back[i] == values[i]);
  sinkdiv_free(back);
  std::filesystem::remove(path);

  CHECK(sinkdiv_read_vector("/nonexistent/vec.csv", &back, &n, &d, nk) ==
        SINKDIV_ERR_IO);
  CHECK(sinkdiv_exit_code(SINKDIV_ERR_IO) == 5);
}
