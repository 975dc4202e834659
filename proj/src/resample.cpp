#include "spotvol/resample.hpp"

#include <cmath>

#include "spotvol/bench.hpp"
#include "spotvol/estimator.hpp"

namespace spotvol {

ObservationSeries previous_tick_resample(
    const std::vector<csv::TickRecord>& ticks, std::int64_t interval_ns,
    const std::vector<SessionWindow>& sessions, bool log_transform,
    double horizon) {
  if (ticks.empty()) throw DataError("resample: empty tick input");
  if (interval_ns <= 0)
    throw std::invalid_argument("interval: must be positive");
  if (sessions.empty())
    throw std::invalid_argument("sessions: at least one required");
  std::int64_t prev_close = 0;
  bool first = true;
  for (const auto& s : sessions) {
    if (!(s.open_ns < s.close_ns))
      throw std::invalid_argument("sessions: open must precede close");
    if ((s.close_ns - s.open_ns) % interval_ns != 0)
      throw std::invalid_argument(
          "sessions: length must be a multiple of the interval");
    if (!first && s.open_ns < prev_close)
      throw std::invalid_argument("sessions: must not overlap");
    prev_close = s.close_ns;
    first = false;
  }

  std::vector<double> values;
  std::size_t cursor = 0;  // first tick strictly after the current boundary
  const auto value_at = [&](std::int64_t boundary) {
    while (cursor < ticks.size() && ticks[cursor].timestamp_ns <= boundary) {
      ++cursor;
    }
    if (cursor == 0) throw DataError("resample: no opening price");
    const double p = ticks[cursor - 1].price;
    return log_transform ? std::log(p) : p;
  };

  bool first_session = true;
  for (const auto& s : sessions) {
    if (first_session) {
      values.push_back(value_at(s.open_ns));
      first_session = false;
    }
    for (std::int64_t b = s.open_ns + interval_ns; b <= s.close_ns;
         b += interval_ns) {
      values.push_back(value_at(b));
    }
  }
  return ObservationSeries(std::move(values), horizon);
}

EstimatorConfig weekly_curve_default_config(std::size_t n) {
  return EstimatorConfig(114, bench::resolve_bandwidth("default", n),
                         std::nullopt, 10, KernelSpec::by_name("onesided"),
                         WeightFunction::triangle());
}

std::vector<std::pair<double, SpotVolEstimate>> weekly_curve(
    const ObservationSeries& obs, const CurveRequest& request) {
  for (double tau : request.taus) {
    if (tau < 0.0 || tau > obs.horizon())
      throw std::invalid_argument("taus: must lie in [0,T]");
  }
  const ObservationSeries* series = &obs;
  std::optional<ObservationSeries> transformed;
  if (request.log_transform) {
    std::vector<double> logged(obs.values().size());
    for (std::size_t i = 0; i < logged.size(); ++i) {
      if (!(obs[i] > 0.0))
        throw DataError("curve: log transform requires positive prices");
      logged[i] = std::log(obs[i]);
    }
    transformed.emplace(std::move(logged), obs.horizon());
    series = &*transformed;
  }
  std::vector<std::pair<double, SpotVolEstimate>> out;
  out.reserve(request.taus.size());
  for (double tau : request.taus) {
    out.emplace_back(tau, spot_vol(*series, tau, request.config));
  }
  return out;
}

}  // namespace spotvol
