#pragma once

#include <cstdint>
#include <vector>

#include "spotvol/csv.hpp"
#include "spotvol/types.hpp"

namespace spotvol {

struct SessionWindow {
  std::int64_t open_ns = 0;
  std::int64_t close_ns = 0;
};

/// Previous-tick resampling onto concatenated session grids: one observation
/// per interval boundary, each the log of the last tick price at or before
/// that boundary.  The first session contributes its opening boundary; later
/// sessions start at their first interval end, so n = total interval count
/// and the output has n+1 values on [0, horizon].
ObservationSeries previous_tick_resample(
    const std::vector<csv::TickRecord>& ticks, std::int64_t interval_ns,
    const std::vector<SessionWindow>& sessions, bool log_transform = true,
    double horizon = 1.0);

struct CurveRequest {
  std::vector<double> taus;  // inside [0, T]
  EstimatorConfig config;
  bool log_transform = false;  // apply log to the observation values first
};

/// The weekly-curve pipeline default: one-sided kernel, triangle weight,
/// p_n = 114, d_n = 10, AUTO u, h = n^(-1/4) (log n)^(-1/6).
EstimatorConfig weekly_curve_default_config(std::size_t n);

/// Spot-variance curve over the requested tau grid.
std::vector<std::pair<double, SpotVolEstimate>> weekly_curve(
    const ObservationSeries& obs, const CurveRequest& request);

}  // namespace spotvol
