#pragma once

#include <functional>
#include <vector>

#include "spotvol/types.hpp"

namespace spotvol::preavg {

/// Non-overlapping pre-averaged increments, one value per block of p_n
/// observations.
struct PreAveragedSeries {
  std::vector<double> values;  // size floor(n / p_n)
  int p_n = 0;
  double delta_n = 0.0;
  double phi2 = 0.0;  // second power mean of the weights
};

/// Block j (j = 1..floor(n/p_n)) maps to
///   sum_{i=1}^{p_n-1} g(i/p_n) * (Y_{(j-1)p_n+i} - Y_{(j-1)p_n+i-1}).
PreAveragedSeries preaverage(const ObservationSeries& obs, int p_n,
                             const WeightFunction& g);

/// phi_theta = (1/p_n) * sum_{i=1}^{p_n-1} g(i/p_n)^theta, theta in [0,2].
double phi(double theta, int p_n, const WeightFunction& g);

/// Weight-increment quadratic form against the noise autocorrelation rho:
///   p_n * sum_{i1} sum_{|i1-i2| <= d_n} dg_{i1} dg_{i2} rho(i1 - i2),
/// with dg_i = g((i+1)/p_n) - g(i/p_n), i = 0..p_n-1.
double psi(int p_n, const WeightFunction& g,
           const std::function<double(long)>& rho, int d_n);

/// psi under i.i.d. noise: p_n * sum_i dg_i^2.
double psi_prime(int p_n, const WeightFunction& g);

}  // namespace spotvol::preavg
