#include "spotvol.h"

#include <atomic>
#include <cmath>
#include <cstring>
#include <thread>
#include <map>
#include <set>
#include <string>

#include "spotvol/bench.hpp"
#include "spotvol/config_json.hpp"
#include "spotvol/csv.hpp"
#include "spotvol/estimator.hpp"
#include "spotvol/resample.hpp"
#include "spotvol/simulate.hpp"

namespace {

thread_local std::string g_last_error;

template <typename F>
sv_status guarded(F&& body) {
  try {
    body();
    return SV_OK;
  } catch (const std::invalid_argument& e) {
    g_last_error = e.what();
    return SV_ERR_USAGE;
  } catch (const spotvol::DataError& e) {
    g_last_error = e.what();
    return SV_ERR_DATA;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return SV_ERR_NUMERIC;
  }
}

sv_status usage_error(const char* message) {
  g_last_error = message;
  return SV_ERR_USAGE;
}

}  // namespace

struct sv_series {
  spotvol::ObservationSeries series;
};

struct sv_estimator_config {
  spotvol::EstimatorConfig config;
};

struct sv_sim_config {
  spotvol::SimConfig config;
};

extern "C" {

const char* sv_last_error(void) { return g_last_error.c_str(); }

const char* sv_version(void) { return "1.0.0"; }

sv_status sv_series_from_values(const double* values, size_t count,
                                double horizon, sv_series** out) {
  if (!values || !out) return usage_error("null argument");
  return guarded([&] {
    *out = new sv_series{
        spotvol::ObservationSeries(std::vector<double>(values, values + count),
                                   horizon)};
  });
}

sv_status sv_series_read_csv(const char* path, sv_series** out) {
  if (!path || !out) return usage_error("null argument");
  return guarded(
      [&] { *out = new sv_series{spotvol::csv::read_observations(path)}; });
}

sv_status sv_series_write_csv(const sv_series* series, const char* path) {
  if (!series || !path) return usage_error("null argument");
  return guarded(
      [&] { spotvol::csv::write_observations(series->series, path); });
}

size_t sv_series_count(const sv_series* series) {
  return series ? series->series.values().size() : 0;
}

double sv_series_horizon(const sv_series* series) {
  return series ? series->series.horizon() : 0.0;
}

sv_status sv_series_values(const sv_series* series, double* buffer,
                           size_t buffer_len) {
  if (!series || !buffer) return usage_error("null argument");
  const auto& v = series->series.values();
  if (buffer_len < v.size()) return usage_error("buffer too small");
  std::memcpy(buffer, v.data(), v.size() * sizeof(double));
  return SV_OK;
}

void sv_series_free(sv_series* series) { delete series; }

sv_status sv_estimator_config_from_json(const char* json_text, size_t n,
                                        sv_estimator_config** out) {
  if (!json_text || !out) return usage_error("null argument");
  return guarded([&] {
    *out = new sv_estimator_config{
        spotvol::config::parse_estimator(json_text, n)};
  });
}

void sv_estimator_config_free(sv_estimator_config* config) { delete config; }

sv_status sv_estimate_at(const sv_series* series,
                         const sv_estimator_config* config, double tau,
                         sv_estimate* out) {
  if (!series || !config || !out) return usage_error("null argument");
  return guarded([&] {
    const spotvol::SpotVolEstimate est =
        spotvol::spot_vol(series->series, tau, config->config);
    out->tau = est.tau;
    out->sigma2_hat = est.sigma2_hat;
    out->noise_correction = est.noise_correction;
    out->ecf_value = est.ecf_value;
    out->u_used = est.u_used;
    out->clamped = est.clamped ? 1 : 0;
    out->debias_correction = est.debias_correction;
  });
}

sv_status sv_sim_config_from_json(const char* json_text, sv_sim_config** out) {
  if (!json_text || !out) return usage_error("null argument");
  return guarded(
      [&] { *out = new sv_sim_config{spotvol::config::parse_sim(json_text)}; });
}

void sv_sim_config_free(sv_sim_config* config) { delete config; }

sv_status sv_simulate_to_csv(const sv_sim_config* config, uint64_t seed,
                             const char* path_csv, const char* obs_csv) {
  if (!config) return usage_error("null argument");
  if (!path_csv && !obs_csv) return usage_error("no output path given");
  return guarded([&] {
    spotvol::SimConfig cfg = config->config;
    cfg.seed = seed;
    const spotvol::SimPath path = spotvol::simulate_full(cfg);
    if (path_csv) spotvol::csv::write_path(path, cfg.horizon, path_csv);
    if (obs_csv) {
      spotvol::csv::write_observations(
          spotvol::ObservationSeries(path.noisy, cfg.horizon), obs_csv);
    }
  });
}

sv_status sv_simulate_series(const sv_sim_config* config, uint64_t seed,
                             sv_series** out) {
  if (!config || !out) return usage_error("null argument");
  return guarded([&] {
    spotvol::SimConfig cfg = config->config;
    cfg.seed = seed;
    const spotvol::SimPath path = spotvol::simulate_full(cfg);
    *out = new sv_series{
        spotvol::ObservationSeries(path.noisy, cfg.horizon)};
  });
}

sv_status sv_run_bench(const char* grid_json_text, long reps, uint64_t seed,
                       int threads, const char* out_csv,
                       const char* studentized_dir) {
  if (!grid_json_text || !out_csv) return usage_error("null argument");
  return guarded([&] {
    const spotvol::config::BenchGrid grid =
        spotvol::config::parse_grid(grid_json_text);
    const long effective_reps = reps > 0 ? reps : grid.reps;
    if (effective_reps < 1)
      throw std::invalid_argument("reps: must be >= 1 (flag or grid field)");
    spotvol::bench::RunOptions options;
    options.parallelism = threads > 0 ? threads : 1;
    options.keep_studentized = studentized_dir != nullptr;
    std::vector<spotvol::bench::MonteCarloReport> reports;
    reports.reserve(grid.cells.size());
    for (std::size_t i = 0; i < grid.cells.size(); ++i) {
      reports.push_back(
          spotvol::bench::run_cell(grid.cells[i], effective_reps, seed,
                                   options));
      if (studentized_dir) {
        spotvol::csv::write_studentized(
            reports.back().studentized_samples,
            std::string(studentized_dir) + "/studentized_cell" +
                std::to_string(i) + ".csv");
        reports.back().studentized_samples.clear();
      }
    }
    spotvol::csv::write_reports(reports, out_csv);
  });
}

sv_status sv_run_compare(const char* grid_json_text, long reps, uint64_t seed,
                         int threads, const char* out_csv) {
  if (!grid_json_text || !out_csv) return usage_error("null argument");
  return guarded([&] {
    const spotvol::config::BenchGrid grid =
        spotvol::config::parse_grid(grid_json_text);
    const long effective_reps = reps > 0 ? reps : grid.reps;
    if (effective_reps < 1)
      throw std::invalid_argument("reps: must be >= 1 (flag or grid field)");
    const int workers = threads > 0 ? threads : 1;

    std::vector<spotvol::csv::CompareRow> rows;
    for (const auto& cell : grid.cells) {
      const spotvol::EstimatorConfig config = spotvol::bench::cell_config(cell);
      const spotvol::SimConfig sim = spotvol::bench::cell_sim_config(cell, seed);
      const double delta_n = sim.horizon / static_cast<double>(cell.n);
      const auto tau_idx =
          static_cast<std::size_t>(std::llround(cell.tau / delta_n));

      std::vector<double> rb_ll(effective_reps), rb_fw1(effective_reps),
          rb_fw2(effective_reps);
      const auto body = [&](long r) {
        const spotvol::SimPath path =
            spotvol::simulate_full(sim, static_cast<std::uint64_t>(r));
        const spotvol::ObservationSeries obs(path.noisy, sim.horizon);
        const double truth = path.spot_var[tau_idx];
        const spotvol::SpotVolEstimate est =
            spotvol::spot_vol(obs, cell.tau, config);
        rb_ll[r] = spotvol::bench::relative_bias(est.sigma2_hat, truth);
        const spotvol::bench::FwPair fw = spotvol::bench::fw_estimators(
            obs, cell.tau, config.p_n(), config.h(), config.weight(),
            config.kernel());
        rb_fw1[r] = spotvol::bench::relative_bias(fw.fw1, truth);
        rb_fw2[r] = spotvol::bench::relative_bias(fw.fw2, truth);
      };
      if (workers == 1) {
        for (long r = 0; r < effective_reps; ++r) body(r);
      } else {
        std::atomic<long> next{0};
        std::vector<std::thread> pool;
        for (int t = 0; t < workers; ++t) {
          pool.emplace_back([&] {
            for (;;) {
              const long r = next.fetch_add(1);
              if (r >= effective_reps) return;
              body(r);
            }
          });
        }
        for (auto& th : pool) th.join();
      }

      const auto summarize = [&](const std::vector<double>& rb,
                                 const char* name) {
        double sum = 0.0, sum_sq = 0.0;
        for (double v : rb) {
          sum += v;
          sum_sq += v * v;
        }
        const double mean = sum / effective_reps;
        const double sd =
            effective_reps > 1
                ? std::sqrt((sum_sq - sum * sum / effective_reps) /
                            (effective_reps - 1))
                : 0.0;
        rows.push_back({cell.beta1, cell.h_rule, name, mean, sd,
                        sum_sq / effective_reps, effective_reps, seed});
      };
      summarize(rb_ll, "ll");
      summarize(rb_fw1, "fw1");
      summarize(rb_fw2, "fw2");
    }
    spotvol::csv::write_compare(rows, out_csv);
  });
}

sv_status sv_run_curve(const char* ticks_csv, const char* config_json,
                       const sv_curve_options* options, const double* taus,
                       size_t tau_count, const char* out_csv) {
  if (!ticks_csv || !options || !taus || !out_csv)
    return usage_error("null argument");
  if (tau_count == 0) return usage_error("taus: at least one required");
  return guarded([&] {
    const auto ticks = spotvol::csv::read_ticks(ticks_csv);

    constexpr std::int64_t kDayNs = 86400LL * 1000000000LL;
    const std::int64_t offset_ns = options->utc_offset_s * 1000000000LL;
    std::set<std::int64_t> days;
    for (const auto& t : ticks) {
      std::int64_t shifted = t.timestamp_ns + offset_ns;
      std::int64_t day = shifted / kDayNs;
      if (shifted < 0 && shifted % kDayNs != 0) --day;
      days.insert(day);
    }
    std::vector<spotvol::SessionWindow> sessions;
    for (std::int64_t day : days) {
      const std::int64_t base = day * kDayNs - offset_ns;
      sessions.push_back({base + options->session_open_ns,
                          base + options->session_close_ns});
    }

    const spotvol::ObservationSeries obs = spotvol::previous_tick_resample(
        ticks, options->interval_ns, sessions,
        /*log_transform=*/options->log_transform != 0,
        options->horizon > 0.0 ? options->horizon : 1.0);

    spotvol::CurveRequest request{
        std::vector<double>(taus, taus + tau_count),
        config_json
            ? spotvol::config::parse_estimator(config_json, obs.increments())
            : spotvol::weekly_curve_default_config(obs.increments()),
        false};
    const auto curve = spotvol::weekly_curve(obs, request);
    spotvol::csv::write_curve(curve, out_csv);
  });
}

}  // extern "C"
