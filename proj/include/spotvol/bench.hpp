#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "spotvol/estimator.hpp"
#include "spotvol/simulate.hpp"
#include "spotvol/types.hpp"

namespace spotvol::bench {

/// One Monte Carlo design point.  p_n = 0 resolves to floor(sqrt(n)/3).
struct BenchCell {
  double tau = 0.5;
  std::string kernel = "k1";
  std::string h_rule = "n^-0.26";  // "n^-x", "default", or a literal number
  double sigma_eps = 0.01;
  double beta1 = 1.2;
  int d_n = 0;
  double s = 0.0;
  std::size_t n = 117000;
  int p_n = 0;
  // Jump design around beta1; the reference values from the simulation study.
  double gamma1 = 0.15;
  double beta2 = 1.0;
  double gamma2 = 0.05;
  double cp_intensity = 3.0;
};

struct MonteCarloReport {
  BenchCell cell;
  long reps = 0;
  std::uint64_t seed = 0;
  double rb_mean = 0.0;  // mean relative bias
  double sd = 0.0;       // sample SD of the relative bias
  double mse = 0.0;      // mean squared relative error
  double cov90 = 0.0;    // coverage of the studentized statistic, percent
  double cov95 = 0.0;
  double cov99 = 0.0;
  double sta2_mean = 0.0;
  std::vector<double> studentized_samples;  // filled when requested
  double runtime_seconds = 0.0;
};

double relative_bias(double estimate, double truth);

/// MA(d_n) noise autocorrelation at lag k for fractional parameter s;
/// rho(0) = 1, symmetric, zero beyond d_n.
double rho_ma(long k, double s, int d_n);

/// Bandwidth rules: "n^-0.26" style powers, "default" for
/// n^(-1/4) (log n)^(-1/6), or a literal value.
double resolve_bandwidth(const std::string& rule, std::size_t n);

int default_p_n(std::size_t n);

/// Estimator configuration a cell implies (triangle weight, AUTO u).
EstimatorConfig cell_config(const BenchCell& cell);

/// Simulation design a cell implies.
SimConfig cell_sim_config(const BenchCell& cell, std::uint64_t seed);

/// First-order theory for a cell: relative bias b/sigma^2 at the design
/// u, and the CLT standard deviation of the relative bias.
struct TheoryValues {
  double trb = 0.0;
  double tsd = 0.0;
};
TheoryValues theoretical_trb_tsd(const BenchCell& cell,
                                 const EstimatorConfig& config);

/// Truncated pre-averaging comparison estimators (overlapping windows,
/// bipower-variation threshold).  fw1 truncates the squared statistic only,
/// fw2 truncates the noise-corrected summand.
struct FwPair {
  double fw1 = 0.0;
  double fw2 = 0.0;
};
FwPair fw_estimators(const ObservationSeries& obs, double tau, int p_n,
                     double h, const WeightFunction& g,
                     const KernelSpec& kernel);

struct RunOptions {
  int parallelism = 1;
  bool keep_studentized = false;
};

/// Simulates `reps` independent paths of the cell design, estimates at tau,
/// and aggregates R.B. / S.D. / M.S.E. and studentized coverage.
/// Deterministic given (cell, reps, seed); independent of parallelism.
MonteCarloReport run_cell(const BenchCell& cell, long reps, std::uint64_t seed,
                          const RunOptions& options = {});

}  // namespace spotvol::bench
