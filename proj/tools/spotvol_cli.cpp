// spotvol command-line tool.  Talks to the core exclusively through the C
// API in spotvol.h; exit codes mirror sv_status (0 ok, 1 usage, 2 data,
// 3 numeric).

#include <cinttypes>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "spotvol.h"

namespace {

int fail(sv_status status) {
  std::fprintf(stderr, "error: %s\n", sv_last_error());
  return static_cast<int>(status);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    std::fprintf(stderr, "error: cannot open '%s'\n", path.c_str());
    std::exit(2);
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Estimator settings assembled from flags into the config JSON schema.
struct EstimatorFlags {
  std::string config_path;
  int p_n = 0;
  std::string h;
  double u = 0.0;
  bool auto_u = false;
  int d_n = -1;
  std::string kernel;
  std::string debias = "none";
  double debias_lambda = 2.0;
  double debias_xi = 1e-6;
  int debias_iterations = 1;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--config", config_path, "estimator config JSON file");
    cmd->add_option("--p-n", p_n, "pre-averaging window");
    cmd->add_option("--bandwidth", h, "bandwidth (number or rule like n^-0.26)");
    cmd->add_option("--u", u, "fixed ECF argument");
    cmd->add_flag("--auto-u", auto_u, "data-driven ECF argument (default)");
    cmd->add_option("--d-n", d_n, "noise dependence span");
    cmd->add_option("--kernel", kernel, "k1|k2|k3|k4|uniform|onesided");
    cmd->add_option("--debias", debias, "none|ratio|iterative");
    cmd->add_option("--debias-lambda", debias_lambda, "de-bias scale > 1");
    cmd->add_option("--debias-xi", debias_xi, "iterative regularizer");
    cmd->add_option("--debias-iterations", debias_iterations,
                    "iterative step count");
  }

  std::string to_json() const {
    if (!config_path.empty()) return slurp(config_path);
    std::ostringstream js;
    js << "{\"estimator\":{";
    bool first = true;
    const auto field = [&](const std::string& text) {
      if (!first) js << ',';
      js << text;
      first = false;
    };
    if (p_n > 0) field("\"p_n\":" + std::to_string(p_n));
    if (!h.empty()) field("\"h\":\"" + h + "\"");
    if (u != 0.0 && !auto_u) field("\"u\":" + std::to_string(u));
    if (d_n >= 0) field("\"d_n\":" + std::to_string(d_n));
    if (!kernel.empty()) field("\"kernel\":\"" + kernel + "\"");
    if (debias != "none") {
      std::ostringstream db;
      db << "\"debias\":{\"method\":\"" << debias << "\",\"lambda\":"
         << debias_lambda << ",\"xi\":" << debias_xi
         << ",\"iterations\":" << debias_iterations << "}";
      field(db.str());
    }
    js << "}}";
    return js.str();
  }
};

std::vector<double> parse_taus(const std::string& taus_csv, int tau_count,
                               double horizon) {
  std::vector<double> taus;
  if (!taus_csv.empty()) {
    std::stringstream ss(taus_csv);
    std::string item;
    while (std::getline(ss, item, ',')) taus.push_back(std::stod(item));
  } else {
    const int count = tau_count > 0 ? tau_count : 100;
    for (int i = 1; i <= count; ++i) {
      taus.push_back(horizon * static_cast<double>(i) / (count + 1));
    }
  }
  return taus;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spot volatility estimation toolkit"};
  app.require_subcommand(1);
  app.fallthrough();

  std::optional<std::uint64_t> seed;
  app.add_option("--seed", seed, "RNG seed (required for simulate/bench/compare)");
  int threads = 0;
  app.add_option("--threads", threads, "worker threads for Monte Carlo runs");

  // simulate
  auto* sim_cmd = app.add_subcommand("simulate", "generate a model path");
  std::string sim_config_path, sim_out, sim_obs_out;
  sim_cmd->add_option("--config", sim_config_path, "simulation config JSON");
  sim_cmd->add_option("--out", sim_out, "path CSV (time,clean,noisy,spot_var)");
  sim_cmd->add_option("--obs-out", sim_obs_out, "observation CSV (time,value)");

  // estimate
  auto* est_cmd = app.add_subcommand("estimate", "spot variance at one point");
  std::string est_in;
  double est_tau = 0.5;
  EstimatorFlags est_flags;
  est_cmd->add_option("--in", est_in, "observation CSV")->required();
  est_cmd->add_option("--tau", est_tau, "estimation time in [0,T]");
  est_flags.add_to(est_cmd);

  // bench
  auto* bench_cmd = app.add_subcommand("bench", "Monte Carlo cell grid");
  std::string bench_grid, bench_out, bench_dump;
  long bench_reps = 0;
  bench_cmd->add_option("--grid", bench_grid, "grid JSON file")->required();
  bench_cmd->add_option("--reps", bench_reps, "replications per cell");
  bench_cmd->add_option("--out", bench_out, "report CSV")->required();
  bench_cmd->add_option("--dump-studentized", bench_dump,
                        "directory for per-replication statistics");

  // compare
  auto* cmp_cmd = app.add_subcommand("compare",
                                     "this estimator vs truncated pre-averaging");
  std::string cmp_grid, cmp_out;
  long cmp_reps = 0;
  cmp_cmd->add_option("--grid", cmp_grid, "grid JSON file")->required();
  cmp_cmd->add_option("--reps", cmp_reps, "replications per cell");
  cmp_cmd->add_option("--out", cmp_out, "comparison CSV")->required();

  // curve
  auto* curve_cmd = app.add_subcommand("curve", "weekly volatility curve");
  std::string curve_ticks, curve_out, curve_taus_csv;
  EstimatorFlags curve_flags;
  int curve_tau_count = 0;
  double curve_interval_s = 1.0;
  std::string session_open = "09:30:00", session_close = "16:00:00";
  long long curve_utc_offset = 0;
  double curve_horizon = 1.0;
  bool curve_no_log = false;
  curve_cmd->add_option("--ticks", curve_ticks, "tick CSV (timestamp_ns,price)")
      ->required();
  curve_cmd->add_option("--out", curve_out, "curve CSV")->required();
  curve_cmd->add_option("--taus", curve_taus_csv, "comma-separated tau list");
  curve_cmd->add_option("--tau-count", curve_tau_count,
                        "uniform tau grid size (default 100)");
  curve_cmd->add_option("--interval", curve_interval_s,
                        "resampling interval in seconds");
  curve_cmd->add_option("--session-open", session_open, "HH:MM:SS");
  curve_cmd->add_option("--session-close", session_close, "HH:MM:SS");
  curve_cmd->add_option("--utc-offset", curve_utc_offset,
                        "seconds added before the day split");
  curve_cmd->add_option("--horizon", curve_horizon,
                        "time units spanned by the grid (default 1 week)");
  curve_cmd->add_flag("--no-log", curve_no_log, "estimate on raw prices");
  curve_flags.add_to(curve_cmd);

  CLI11_PARSE(app, argc, argv);

  const auto parse_hms = [](const std::string& hms) -> std::int64_t {
    int hours = 0, minutes = 0, seconds = 0;
    if (std::sscanf(hms.c_str(), "%d:%d:%d", &hours, &minutes, &seconds) < 2) {
      std::fprintf(stderr, "error: cannot parse time '%s'\n", hms.c_str());
      std::exit(1);
    }
    return ((hours * 60LL + minutes) * 60LL + seconds) * 1000000000LL;
  };

  if (sim_cmd->parsed()) {
    if (!seed) {
      std::fprintf(stderr, "error: simulate requires --seed\n");
      return 1;
    }
    const std::string json =
        sim_config_path.empty() ? "{}" : slurp(sim_config_path);
    sv_sim_config* cfg = nullptr;
    if (auto st = sv_sim_config_from_json(json.c_str(), &cfg)) return fail(st);
    const char* path_out = sim_out.empty() ? nullptr : sim_out.c_str();
    const char* obs_out = sim_obs_out.empty() ? nullptr : sim_obs_out.c_str();
    const sv_status st = sv_simulate_to_csv(cfg, *seed, path_out, obs_out);
    sv_sim_config_free(cfg);
    return st == SV_OK ? 0 : fail(st);
  }

  if (est_cmd->parsed()) {
    sv_series* series = nullptr;
    if (auto st = sv_series_read_csv(est_in.c_str(), &series)) return fail(st);
    const size_t n = sv_series_count(series) - 1;
    sv_estimator_config* cfg = nullptr;
    const std::string json = est_flags.to_json();
    if (auto st = sv_estimator_config_from_json(json.c_str(), n, &cfg)) {
      sv_series_free(series);
      return fail(st);
    }
    sv_estimate est{};
    const sv_status st = sv_estimate_at(series, cfg, est_tau, &est);
    sv_estimator_config_free(cfg);
    sv_series_free(series);
    if (st != SV_OK) return fail(st);
    std::printf("{\"tau\":%.17g,\"sigma2_hat\":%.17g,\"noise_correction\":%.17g,"
                "\"ecf_value\":%.17g,\"u_used\":%.17g,\"clamped\":%s,"
                "\"debias_correction\":%.17g}\n",
                est.tau, est.sigma2_hat, est.noise_correction, est.ecf_value,
                est.u_used, est.clamped ? "true" : "false",
                est.debias_correction);
    return 0;
  }

  if (bench_cmd->parsed() || cmp_cmd->parsed()) {
    if (!seed) {
      std::fprintf(stderr, "error: %s requires --seed\n",
                   bench_cmd->parsed() ? "bench" : "compare");
      return 1;
    }
    const bool is_bench = bench_cmd->parsed();
    const std::string json = slurp(is_bench ? bench_grid : cmp_grid);
    const long reps = is_bench ? bench_reps : cmp_reps;
    const std::string& out = is_bench ? bench_out : cmp_out;
    const sv_status st =
        is_bench
            ? sv_run_bench(json.c_str(), reps, *seed, threads, out.c_str(),
                           bench_dump.empty() ? nullptr : bench_dump.c_str())
            : sv_run_compare(json.c_str(), reps, *seed, threads, out.c_str());
    return st == SV_OK ? 0 : fail(st);
  }

  if (curve_cmd->parsed()) {
    sv_curve_options options{};
    options.interval_ns = static_cast<int64_t>(curve_interval_s * 1e9);
    options.session_open_ns = parse_hms(session_open);
    options.session_close_ns = parse_hms(session_close);
    options.utc_offset_s = curve_utc_offset;
    options.log_transform = curve_no_log ? 0 : 1;
    options.horizon = curve_horizon;
    const std::vector<double> taus =
        parse_taus(curve_taus_csv, curve_tau_count, curve_horizon);
    std::string config_json;
    const char* config_ptr = nullptr;
    if (!curve_flags.config_path.empty() || curve_flags.p_n > 0 ||
        !curve_flags.h.empty() || !curve_flags.kernel.empty() ||
        curve_flags.d_n >= 0 || curve_flags.debias != "none") {
      config_json = curve_flags.to_json();
      config_ptr = config_json.c_str();
    }
    const sv_status st =
        sv_run_curve(curve_ticks.c_str(), config_ptr, &options, taus.data(),
                     taus.size(), curve_out.c_str());
    return st == SV_OK ? 0 : fail(st);
  }

  return 0;
}
