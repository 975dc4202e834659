#include "spotvol/preavg.hpp"

#include <cmath>
#include <cstdlib>

namespace spotvol::preavg {

namespace {

// g((i+1)/p_n) - g(i/p_n) for i = 0..p_n-1; g(0) = g(1) = 0 supply the
// boundary terms.
std::vector<double> weight_increments(int p_n, const WeightFunction& g) {
  std::vector<double> dg(p_n);
  double prev = 0.0;  // g(0)
  for (int i = 1; i <= p_n; ++i) {
    const double cur = (i == p_n) ? 0.0 : g(static_cast<double>(i) / p_n);
    dg[i - 1] = cur - prev;
    prev = cur;
  }
  return dg;
}

}  // namespace

PreAveragedSeries preaverage(const ObservationSeries& obs, int p_n,
                             const WeightFunction& g) {
  const std::size_t n = obs.increments();
  if (p_n < 2 || static_cast<std::size_t>(p_n) > n)
    throw std::invalid_argument("p_n: must satisfy 2 <= p_n <= n");

  PreAveragedSeries out;
  out.p_n = p_n;
  out.delta_n = obs.delta();
  out.phi2 = phi(2.0, p_n, g);

  std::vector<double> gi(p_n);  // g(i/p_n), i = 1..p_n-1
  for (int i = 1; i < p_n; ++i) gi[i] = g(static_cast<double>(i) / p_n);

  const std::size_t blocks = n / static_cast<std::size_t>(p_n);
  out.values.resize(blocks);
  const auto& y = obs.values();
  for (std::size_t j = 0; j < blocks; ++j) {
    const std::size_t base = j * static_cast<std::size_t>(p_n);
    double acc = 0.0;
    for (int i = 1; i < p_n; ++i) {
      acc += gi[i] * (y[base + i] - y[base + i - 1]);
    }
    out.values[j] = acc;
  }
  return out;
}

double phi(double theta, int p_n, const WeightFunction& g) {
  if (p_n < 2) throw std::invalid_argument("p_n: must be >= 2");
  if (theta < 0.0 || theta > 2.0)
    throw std::invalid_argument("theta: must lie in [0,2]");
  double acc = 0.0;
  for (int i = 1; i < p_n; ++i) {
    acc += std::pow(g(static_cast<double>(i) / p_n), theta);
  }
  return acc / p_n;
}

double psi(int p_n, const WeightFunction& g,
           const std::function<double(long)>& rho, int d_n) {
  if (p_n < 2) throw std::invalid_argument("p_n: must be >= 2");
  if (d_n < 0) throw std::invalid_argument("d_n: must be >= 0");
  const std::vector<double> dg = weight_increments(p_n, g);
  double acc = 0.0;
  for (int i1 = 0; i1 < p_n; ++i1) {
    const int lo = std::max(i1 - d_n, 0);
    const int hi = std::min(i1 + d_n, p_n - 1);
    for (int i2 = lo; i2 <= hi; ++i2) {
      acc += dg[i1] * dg[i2] * rho(i1 - i2);
    }
  }
  return p_n * acc;
}

double psi_prime(int p_n, const WeightFunction& g) {
  if (p_n < 2) throw std::invalid_argument("p_n: must be >= 2");
  const std::vector<double> dg = weight_increments(p_n, g);
  double acc = 0.0;
  for (double d : dg) acc += d * d;
  return p_n * acc;
}

}  // namespace spotvol::preavg
