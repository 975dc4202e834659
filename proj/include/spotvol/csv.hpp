#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "spotvol/bench.hpp"
#include "spotvol/simulate.hpp"
#include "spotvol/types.hpp"

namespace spotvol::csv {

struct TickRecord {
  std::int64_t timestamp_ns = 0;
  double price = 0.0;
};

/// Observation CSV, header "time,value".  Doubles are written with 17
/// significant digits so a write/read round trip is bit-exact.
void write_observations(const ObservationSeries& obs, const std::string& path);
ObservationSeries read_observations(const std::string& path);

/// Simulated path CSV, header "time,clean,noisy,spot_var".
void write_path(const SimPath& sim, double horizon, const std::string& path);

/// Tick CSV, header "timestamp_ns,price"; timestamps must be nondecreasing
/// and prices positive.  Errors carry the offending line number.
std::vector<TickRecord> read_ticks(const std::string& path);

/// Bench report CSV, one row per cell.
void write_reports(const std::vector<bench::MonteCarloReport>& reports,
                   const std::string& path);

/// Comparison CSV: one row per (cell, estimator in {ll, fw1, fw2}).
struct CompareRow {
  double beta1 = 0.0;
  std::string h_rule;
  std::string estimator;
  double rb_mean = 0.0;
  double sd = 0.0;
  double mse = 0.0;
  long reps = 0;
  std::uint64_t seed = 0;
};
void write_compare(const std::vector<CompareRow>& rows,
                   const std::string& path);

/// Per-replication studentized samples, header "rep,sta2".
void write_studentized(const std::vector<double>& samples,
                       const std::string& path);

/// Curve CSV, header "tau,sigma2_hat,noise_correction,u_used,clamped".
void write_curve(const std::vector<std::pair<double, SpotVolEstimate>>& curve,
                 const std::string& path);

}  // namespace spotvol::csv
