#include <doctest.h>

#include <cmath>

#include "spotvol/bench.hpp"

using namespace spotvol;
using namespace spotvol::bench;

TEST_CASE("relative_bias arithmetic") {
  CHECK(relative_bias(0.3, 0.25) == doctest::Approx(0.2).epsilon(1e-14));
  CHECK(relative_bias(0.25, 0.25) == 0.0);
  CHECK(relative_bias(0.0, 0.25) == -1.0);
  CHECK_THROWS_AS(relative_bias(0.1, 0.0), std::invalid_argument);
}

TEST_CASE("rho_ma boundary behavior") {
  CHECK(rho_ma(0, -0.4, 5) == 1.0);
  CHECK(rho_ma(3, 0.0, 5) == 0.0);
  CHECK(rho_ma(6, -0.4, 5) == 0.0);
  CHECK(rho_ma(-2, -0.4, 5) == rho_ma(2, -0.4, 5));
  CHECK_THROWS_AS(rho_ma(1, 0.7, 5), std::invalid_argument);
}

TEST_CASE("bandwidth rules resolve against n") {
  CHECK(resolve_bandwidth("n^-0.26", 117000) ==
        doctest::Approx(std::pow(117000.0, -0.26)).epsilon(1e-14));
  CHECK(resolve_bandwidth("0.05", 1000) == doctest::Approx(0.05));
  const double expected = 1.0 / (std::pow(117000.0, 0.25) *
                                 std::pow(std::log(117000.0), 1.0 / 6.0));
  CHECK(resolve_bandwidth("default", 117000) ==
        doctest::Approx(expected).epsilon(1e-14));
  CHECK_THROWS_AS(resolve_bandwidth("n^oops", 100), std::invalid_argument);
}

TEST_CASE("theory values move with the design parameters") {
  BenchCell base;
  base.n = 117000;

  SUBCASE("larger noise scale raises the theoretical SD") {
    double prev = 0.0;
    for (double eps : {0.01, 0.03, 0.05}) {
      BenchCell cell = base;
      cell.sigma_eps = eps;
      const auto theory = theoretical_trb_tsd(cell, cell_config(cell));
      CHECK(theory.tsd > prev);
      prev = theory.tsd;
    }
  }

  SUBCASE("larger beta1 raises the theoretical relative bias") {
    double prev = 0.0;
    for (double beta : {1.2, 1.5, 1.8}) {
      BenchCell cell = base;
      cell.beta1 = beta;
      const auto theory = theoretical_trb_tsd(cell, cell_config(cell));
      CHECK(theory.trb > prev);
      prev = theory.trb;
    }
  }

  SUBCASE("wider kernels raise the theoretical SD") {
    double prev = 0.0;
    for (const char* kernel : {"k1", "k2", "k3", "k4"}) {
      BenchCell cell = base;
      cell.kernel = kernel;
      const auto theory = theoretical_trb_tsd(cell, cell_config(cell));
      CHECK(theory.tsd >= prev);
      prev = theory.tsd;
    }
  }
}

TEST_CASE("fw estimators are consistent on clean constant-volatility paths") {
  const std::size_t n = 23400;
  SimConfig cfg;
  cfg.n = n;
  cfg.jumps.stable_components.clear();
  cfg.jumps.poisson.reset();
  cfg.noise = NoiseSpec{0.0, 0, 0.0};
  cfg.heston.vol_of_vol = 0.0;  // sigma^2 frozen at its start value
  cfg.seed = 71;

  const auto g = WeightFunction::triangle();
  const auto kernel = KernelSpec::by_name("uniform");
  const double h = resolve_bandwidth("n^-0.26", n);
  double sum1 = 0.0, sum2 = 0.0, truth_sum = 0.0;
  const int reps = 100;
  for (int r = 0; r < reps; ++r) {
    const SimPath path = simulate_full(cfg, r);
    const ObservationSeries obs(path.noisy, 1.0);
    const auto fw = fw_estimators(obs, 0.5, 50, h, g, kernel);
    // No jumps and a huge bipower threshold: truncation never fires.
    CHECK(fw.fw1 == fw.fw2);
    sum1 += fw.fw1;
    sum2 += fw.fw2;
    truth_sum += path.spot_var[n / 2];
  }
  CHECK(std::abs(sum1 / reps - truth_sum / reps) < 0.1 * truth_sum / reps);
  CHECK(std::abs(sum2 / reps - truth_sum / reps) < 0.1 * truth_sum / reps);
}

TEST_CASE("run_cell: degenerate single replication") {
  BenchCell cell;
  cell.n = 2000;
  const auto report = run_cell(cell, 1, 123);
  CHECK(report.sd == 0.0);
  CHECK(report.reps == 1);
}

TEST_CASE("run_cell is invariant to the parallelism level") {
  BenchCell cell;
  cell.n = 4000;
  cell.sigma_eps = 0.01;
  RunOptions serial;
  serial.parallelism = 1;
  RunOptions wide;
  wide.parallelism = 8;
  const auto a = run_cell(cell, 16, 2024, serial);
  const auto b = run_cell(cell, 16, 2024, wide);
  CHECK(a.rb_mean == b.rb_mean);
  CHECK(a.sd == b.sd);
  CHECK(a.mse == b.mse);
  CHECK(a.cov90 == b.cov90);
  CHECK(a.cov95 == b.cov95);
  CHECK(a.cov99 == b.cov99);
  CHECK(a.sta2_mean == b.sta2_mean);
}

TEST_CASE("run_cell means settle within Monte Carlo error as reps grow") {
  BenchCell cell;
  cell.n = 20000;
  const auto small = run_cell(cell, 100, 7);
  const auto large = run_cell(cell, 400, 7);
  // The 100-rep mean shares its first 100 paths with the 400-rep mean; the
  // drift between them is bounded by the small-sample MC error.
  const double se = large.sd / std::sqrt(100.0);
  CHECK(std::abs(small.rb_mean - large.rb_mean) < 5.0 * se);
}
