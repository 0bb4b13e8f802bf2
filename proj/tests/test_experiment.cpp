//
// Project     : sinkdiv
// Module      : experiment tests
//

#include "sinkdiv/experiment.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

using namespace sinkdiv;

namespace {

std::string temp_path(const char* name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

std::string first_line(const std::string& path) {
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  return line;
}

} // namespace

TEST_CASE("the three-pulse signal peaks at its pulse centers") {
  const Grid1D grid(0.0, 1.0, 1001);
  const Vector f = three_pulse(grid, 0.01, 0.0);
  // Grid point 400 sits exactly on x = 0.4; the neighbor pulses are 10 sigma
  // away and contribute nothing visible.
  CHECK(f(400) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(f(500) == doctest::Approx(-1.0).epsilon(1e-10));
  CHECK(f(600) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(std::abs(f(0)) <= 1e-300);

  // Shifting moves the pattern rigidly.
  const Vector g = three_pulse(grid, 0.01, 0.2);
  CHECK(g(600) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(g(700) == doctest::Approx(-1.0).epsilon(1e-10));

  CHECK_THROWS_AS(three_pulse(grid, 0.0, 0.0), error);
}

TEST_CASE("losses vanish on identical signals") {
  const Grid1D grid(0.0, 1.0, 256);
  const Vector f = three_pulse(grid, 0.05, 0.0);
  CHECK(euclidean_loss(f, f) == 0.0);
  // Underflowed tail entries stall the compensated cdf, so the first-reach
  // quantile maps them a short distance back; the result is fp noise, not 0.
  CHECK(wasserstein_loss(f, f, grid) <= 1e-9);
  ExperimentConfig config;
  const double self = sinkhorn_loss(f, f, grid, SinkhornMode::hierarchical, config);
  // Entropic self-distance is positive but tiny at lambda = 50.
  CHECK(self >= 0.0);
  CHECK(self <= 0.5);
}

TEST_CASE("the euclidean loss is the plain two-norm") {
  Vector a(3), b(3);
  a << 1.0, 2.0, 3.0;
  b << 1.0, 5.0, 7.0;
  CHECK(euclidean_loss(a, b) == doctest::Approx(5.0).epsilon(1e-15));
  CHECK_THROWS_AS(euclidean_loss(a, Vector::Zero(4)), error);
}

TEST_CASE("a small sweep behaves like the full experiment") {
  ExperimentConfig config;
  config.threads = 2;
  const SweepResult sweep = run_sweep(512, 0.05, 13, config);
  CHECK(sweep.n == 512);
  REQUIRE(sweep.rows.size() == 13);
  CHECK(sweep.rows.front().shift == doctest::Approx(-0.3).epsilon(1e-12));
  CHECK(sweep.rows.back().shift == doctest::Approx(0.3).epsilon(1e-12));
  // The middle row compares the signal with itself.
  const SweepRow& center = sweep.rows[6];
  CHECK(center.shift == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(center.d_e == 0.0);
  CHECK(center.d_w <= 1e-9);
  for (const SweepRow& row : sweep.rows) {
    CHECK(std::isfinite(row.d_s));
    // Entropic values dominate the exact transport distance and track the
    // dense reference.
    CHECK(row.d_s_h >= row.d_w - 1e-9);
    CHECK(row.d_s >= row.d_w - 1e-9);
    CHECK(std::abs(row.d_s - row.d_s_h) <= 0.05);
  }
}

TEST_CASE("sweep rows are independent of the thread count") {
  ExperimentConfig serial;
  serial.threads = 1;
  ExperimentConfig parallel;
  parallel.threads = 4;
  const SweepResult a = run_sweep(256, 0.05, 7, serial);
  const SweepResult b = run_sweep(256, 0.05, 7, parallel);
  REQUIRE(a.rows.size() == b.rows.size());
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    CHECK(a.rows[i].d_e == b.rows[i].d_e);
    CHECK(a.rows[i].d_w == b.rows[i].d_w);
    CHECK(a.rows[i].d_s == b.rows[i].d_s);
    CHECK(a.rows[i].d_s_h == b.rows[i].d_s_h);
  }
}

TEST_CASE("the dense reference column can be disabled") {
  ExperimentConfig config;
  config.with_dense = 0;
  const SweepResult sweep = run_sweep(256, 0.05, 3, config);
  for (const SweepRow& row : sweep.rows) {
    CHECK(std::isnan(row.d_s));
    CHECK(std::isfinite(row.d_s_h));
  }
}

TEST_CASE("sweep and bench tables carry their headers") {
  ExperimentConfig config;
  const SweepResult sweep = run_sweep(256, 0.05, 3, config);
  const std::string sweep_path = temp_path("sinkdiv_test_sweep.csv");
  write_sweep_csv(sweep, sweep_path);
  CHECK(first_line(sweep_path) == "shift,d_E,d_W,d_S,d_S_H");
  std::filesystem::remove(sweep_path);

  const std::vector<BenchRow> rows = bench_scaling({1024, 2048}, 0.05, 3, config);
  REQUIRE(rows.size() == 2);
  for (const BenchRow& row : rows) {
    CHECK(row.seconds > 0.0);
    CHECK(row.repetitions == 3);
  }
  CHECK(rows[1].n == 2048);
  const std::string bench_path = temp_path("sinkdiv_test_bench.csv");
  write_bench_csv(rows, bench_path);
  CHECK(first_line(bench_path) == "n,seconds,repetitions");
  std::filesystem::remove(bench_path);
}
