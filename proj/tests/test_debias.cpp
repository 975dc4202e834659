#include <doctest.h>

#include <cmath>

#include "spotvol/estimator.hpp"

using namespace spotvol;

TEST_CASE("debias_ratio removes a single power-law bias exactly") {
  const double sigma2 = 0.25, c = 0.1, beta = 1.5;
  const auto est_fn = [&](double u) {
    return sigma2 + c * std::pow(u, beta - 2.0);
  };
  const auto r = debias_ratio(est_fn, 0.9, 2.0);
  CHECK(std::abs(r.corrected - sigma2) < 1e-10);
  CHECK(std::abs(r.correction - c * std::pow(0.9, beta - 2.0)) < 1e-10);
}

TEST_CASE("debias_ratio: vanishing denominator leaves the estimate alone") {
  const auto constant = [](double) { return 0.3; };
  const auto r = debias_ratio(constant, 1.0, 2.0);
  CHECK(r.correction == 0.0);
  CHECK(r.corrected == 0.3);
}

TEST_CASE("debias_ratio guards against cancellation noise") {
  // A 1e-14 perturbation at lambda*u only; the relative-magnitude guard on
  // the denominator keeps the correction negligible.
  const double u = 1.0, lambda = 2.0;
  const auto est_fn = [&](double v) {
    double out = 0.25;
    if (std::abs(v - lambda * u) < 1e-12) out += 1e-14;
    return out;
  };
  const auto r = debias_ratio(est_fn, u, lambda);
  CHECK(std::abs(r.correction) <= 1e-13);
}

TEST_CASE("debias_iterative at one step tracks debias_ratio") {
  const double sigma2 = 0.25, c = 0.1, beta = 1.5;
  const auto est_fn = [&](double u) {
    return sigma2 + c * std::pow(u, beta - 2.0);
  };
  const double u = 0.9, rate_scale = 0.14, xi = 1e-9;
  const double scale_xi = u * u * rate_scale * xi;
  const double iter = debias_iterative(est_fn, u, 2.0, xi, 1, rate_scale);
  const double ratio = debias_ratio(est_fn, u, 2.0).corrected;
  // The one-step recursion is the ratio estimator shifted by exactly one
  // regularizer increment.
  CHECK(std::abs(iter - ratio - scale_xi) <= 1e-6 * scale_xi + 1e-16);
}

TEST_CASE("debias_iterative removes a two-component grid bias") {
  // Indices on the grid 2 - i*rho with rho = 0.25: beta1 = 1.75,
  // beta2 = 1.5.
  const double sigma2 = 0.25, c1 = 1e-2, c2 = 1e-4;
  const auto est_fn = [&](double u) {
    return sigma2 + c1 * std::pow(u, 1.75 - 2.0) +
           c2 * std::pow(u, 1.5 - 2.0);
  };
  const double u = 100.0, xi = 1e-6, rate_scale = 1e-8;
  const double scale_xi = u * u * rate_scale * xi;
  const double out = debias_iterative(est_fn, u, 2.0, xi, 2, rate_scale);
  CHECK(std::abs(out - sigma2) <= 10.0 * scale_xi + 1e-8);
  // The raw bias it removed was orders of magnitude larger.
  CHECK(std::abs(est_fn(u) - sigma2) > 1e-3);
}

TEST_CASE("debias_iterative on a bias-free input adds one xi increment") {
  // The first level adds u^2 * rate_scale * xi at every argument; each later
  // level's ratio reproduces exactly that term, so the offset stays at one
  // increment regardless of the iteration count.
  const auto constant = [](double) { return 0.31; };
  const double u = 2.0, rate_scale = 0.5, xi = 1e-6;
  const double scale_xi = u * u * rate_scale * xi;
  for (int iterations : {1, 2, 3}) {
    const double out =
        debias_iterative(constant, u, 2.0, xi, iterations, rate_scale);
    CHECK(out == doctest::Approx(0.31 + scale_xi).epsilon(1e-12));
  }
}

TEST_CASE("debias parameter validation") {
  const auto f = [](double) { return 1.0; };
  CHECK_THROWS_AS(debias_ratio(f, 1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(debias_iterative(f, 1.0, 2.0, 0.0, 1, 1.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(debias_iterative(f, 1.0, 2.0, 1e-6, 0, 1.0),
                  std::invalid_argument);
}
