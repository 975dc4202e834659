#include "spotvol/bench.hpp"

#include <atomic>
#include <numbers>
#include <charconv>
#include <chrono>
#include <cmath>
#include <thread>

namespace spotvol::bench {

namespace {

// Two-sided standard normal quantiles for 90/95/99 nominal coverage.
constexpr double kQ90 = 1.6449;
constexpr double kQ95 = 1.9600;
constexpr double kQ99 = 2.5758;

std::vector<double> ma_coefficients(double s, int d_n) {
  std::vector<double> a(d_n + 1, 0.0);
  a[0] = 1.0;
  double prod = 1.0;
  for (int j = 1; j <= d_n; ++j) {
    prod *= (j - 1 + s) / j;
    a[j] = prod;
  }
  return a;
}

}  // namespace

double relative_bias(double estimate, double truth) {
  if (!(truth > 0.0)) throw std::invalid_argument("truth: must be positive");
  return (estimate - truth) / truth;
}

double rho_ma(long k, double s, int d_n) {
  if (!(std::abs(s) < 0.5))
    throw std::invalid_argument("s: must satisfy |s| < 0.5");
  k = std::labs(k);
  if (k == 0) return 1.0;
  if (k > d_n) return 0.0;
  const std::vector<double> a = ma_coefficients(s, d_n);
  double den = 1.0;
  for (int i = 1; i <= d_n; ++i) den += a[i] * a[i];
  double num = a[k];
  for (long i = 1; i + k <= d_n; ++i) num += a[k + i] * a[i];
  return num / den;
}

double resolve_bandwidth(const std::string& rule, std::size_t n) {
  const double nd = static_cast<double>(n);
  if (rule == "default") {
    return 1.0 / (std::pow(nd, 0.25) * std::pow(std::log(nd), 1.0 / 6.0));
  }
  if (rule.rfind("n^", 0) == 0) {
    const std::string expo = rule.substr(2);
    double x = 0.0;
    const auto res = std::from_chars(expo.data(), expo.data() + expo.size(), x);
    if (res.ec != std::errc() || res.ptr != expo.data() + expo.size())
      throw std::invalid_argument("h: cannot parse exponent in '" + rule + "'");
    return std::pow(nd, x);
  }
  double v = 0.0;
  const auto res = std::from_chars(rule.data(), rule.data() + rule.size(), v);
  if (res.ec != std::errc() || res.ptr != rule.data() + rule.size() || v <= 0.0)
    throw std::invalid_argument("h: cannot parse bandwidth rule '" + rule + "'");
  return v;
}

int default_p_n(std::size_t n) {
  return static_cast<int>(std::floor(std::sqrt(static_cast<double>(n)) / 3.0));
}

EstimatorConfig cell_config(const BenchCell& cell) {
  const int p_n = cell.p_n > 0 ? cell.p_n : default_p_n(cell.n);
  return EstimatorConfig(p_n, resolve_bandwidth(cell.h_rule, cell.n),
                         std::nullopt, cell.d_n,
                         KernelSpec::by_name(cell.kernel),
                         WeightFunction::triangle());
}

SimConfig cell_sim_config(const BenchCell& cell, std::uint64_t seed) {
  SimConfig cfg;
  cfg.n = cell.n;
  cfg.seed = seed;
  cfg.jumps.stable_components.clear();
  if (cell.gamma1 > 0.0 || cell.gamma2 > 0.0) {
    cfg.jumps.stable_components = {{cell.beta1, cell.gamma1},
                                   {cell.beta2, cell.gamma2}};
  }
  if (cell.cp_intensity > 0.0) {
    cfg.jumps.poisson = PoissonJumps{cell.cp_intensity, 0.0, 1.0};
  } else {
    cfg.jumps.poisson.reset();
  }
  cfg.noise = NoiseSpec{cell.sigma_eps, cell.d_n, cell.s};
  cfg.validate();
  return cfg;
}

TheoryValues theoretical_trb_tsd(const BenchCell& cell,
                                 const EstimatorConfig& config) {
  const std::size_t n = cell.n;
  const double delta_n = 1.0 / static_cast<double>(n);
  const int p_n = config.p_n();
  const double pd = p_n * delta_n;
  const double sigma2 = 0.25;  // stationary mean of the variance design

  const double phi2 = preavg::phi(2.0, p_n, config.weight());
  const double v_n = 1.0 / (phi2 * p_n * p_n * delta_n);
  const double psi =
      cell.d_n == 0
          ? preavg::psi_prime(p_n, config.weight())
          : preavg::psi(
                p_n, config.weight(),
                [&](long k) { return rho_ma(k, cell.s, cell.d_n); }, cell.d_n);
  // The design's MA filter is not variance-normalized; the effective noise
  // variance carries the 1 + sum a_j^2 factor.
  double var_factor = 1.0;
  if (cell.d_n > 0) {
    const auto a = ma_coefficients(cell.s, cell.d_n);
    var_factor = 0.0;
    for (double aj : a) var_factor += aj * aj;
  }
  const double w2 = cell.sigma_eps * cell.sigma_eps * var_factor;
  const double total_var = sigma2 + v_n * psi * w2;

  const double u = select_u(n, std::exp(-0.5 * total_var));
  std::vector<StableComponent> comps;
  if (cell.gamma1 > 0.0) comps.push_back({cell.beta1, cell.gamma1});
  if (cell.gamma2 > 0.0) comps.push_back({cell.beta2, cell.gamma2});
  const double bias =
      comps.empty()
          ? 0.0
          : bias_term(BiasModel::from_cf_symmetric(comps, config.weight(), p_n,
                                                   pd),
                      u);

  const double k2 =
      k2_riemann(config.kernel(), cell.tau, config.h(), p_n, delta_n, n);
  TheoryValues out;
  out.trb = bias / sigma2;
  out.tsd = std::sqrt(pd * std::numbers::sqrt2 * total_var /
                      (config.h() * sigma2) * k2);
  return out;
}

FwPair fw_estimators(const ObservationSeries& obs, double tau, int p_n,
                     double h, const WeightFunction& g,
                     const KernelSpec& kernel) {
  const std::size_t n = obs.increments();
  if (p_n < 2 || static_cast<std::size_t>(p_n) > n / 2)
    throw std::invalid_argument("p_n: must satisfy 2 <= p_n <= n/2");
  const auto& y = obs.values();
  const double dt = obs.delta();

  std::vector<double> gi(p_n + 1, 0.0);  // g(i/p_n), i = 0..p_n
  for (int i = 1; i < p_n; ++i) gi[i] = g(static_cast<double>(i) / p_n);
  std::vector<double> dg_sq(p_n + 1, 0.0);  // (g_i - g_{i-1})^2, i = 1..p_n
  for (int i = 1; i <= p_n; ++i) {
    const double d = gi[i] - gi[i - 1];
    dg_sq[i] = d * d;
  }

  // Bipower variation over the full sample scales the jump threshold.
  double bpv = 0.0;
  for (std::size_t i = 2; i <= n; ++i) {
    bpv += std::abs(y[i - 1] - y[i - 2]) * std::abs(y[i] - y[i - 1]);
  }
  bpv *= std::numbers::pi / 2.0;
  const double s_n = 1.8 * std::sqrt(bpv) * std::pow(p_n * dt, 0.47);

  const std::size_t count = n - static_cast<std::size_t>(p_n) + 1;
  // Edge-adjusted kernel: K_h / (delta_n * sum_j K_h(t_j - tau)).
  double kernel_mass = 0.0;
  for (std::size_t j = 1; j <= count; ++j) {
    kernel_mass += kernel((static_cast<double>(j) * dt - tau) / h) / h;
  }
  kernel_mass *= dt;
  if (!(kernel_mass > 0.0)) throw NumericError("no observations in bandwidth");

  const double phi2 = preavg::phi(2.0, p_n, g);
  double acc1 = 0.0;
  double acc2 = 0.0;
  for (std::size_t j = 1; j <= count; ++j) {
    const double kh = kernel((static_cast<double>(j) * dt - tau) / h) / h;
    if (kh == 0.0) continue;
    double y_tilde = 0.0;
    for (int i = 1; i < p_n; ++i) {
      y_tilde += gi[i] * (y[i + j - 1] - y[i + j - 2]);
    }
    double y_hat = 0.0;
    for (int i = 1; i <= p_n; ++i) {
      const double inc = y[i + j - 1] - y[i + j - 2];
      y_hat += dg_sq[i] * inc * inc;
    }
    const double w = kh / kernel_mass;
    const bool keep = std::abs(y_tilde) <= s_n;
    acc1 += w * ((keep ? y_tilde * y_tilde : 0.0) - 0.5 * y_hat);
    acc2 += keep ? w * (y_tilde * y_tilde - 0.5 * y_hat) : 0.0;
  }
  const double scale = 1.0 / (p_n * phi2);
  return {scale * acc1, scale * acc2};
}

MonteCarloReport run_cell(const BenchCell& cell, long reps, std::uint64_t seed,
                          const RunOptions& options) {
  if (reps < 1) throw std::invalid_argument("reps: must be >= 1");
  const auto t_start = std::chrono::steady_clock::now();

  const EstimatorConfig config = cell_config(cell);
  const SimConfig sim = cell_sim_config(cell, seed);
  const double delta_n = sim.horizon / static_cast<double>(cell.n);
  const double k2 = k2_riemann(config.kernel(), cell.tau, config.h(),
                               config.p_n(), delta_n, cell.n);
  const auto tau_idx =
      static_cast<std::size_t>(std::llround(cell.tau / delta_n));

  std::vector<StableComponent> comps;
  if (cell.gamma1 > 0.0) comps.push_back({cell.beta1, cell.gamma1});
  if (cell.gamma2 > 0.0) comps.push_back({cell.beta2, cell.gamma2});
  const bool has_bias = !comps.empty();
  const BiasModel bias_model =
      has_bias ? BiasModel::from_cf_symmetric(comps, config.weight(),
                                              config.p_n(),
                                              config.p_n() * delta_n)
               : BiasModel{};

  std::vector<double> rb(reps), sta(reps);

  const auto worker_body = [&](long r) {
    const SimPath path = simulate_full(sim, static_cast<std::uint64_t>(r));
    const ObservationSeries obs(path.noisy, sim.horizon);
    const SpotVolEstimate est = spot_vol(obs, cell.tau, config);
    const double truth = path.spot_var[tau_idx];
    rb[r] = relative_bias(est.sigma2_hat, truth);
    const double bias = has_bias ? bias_term(bias_model, est.u_used) : 0.0;
    sta[r] = studentized(est, truth, bias, k2, config.p_n(), delta_n,
                         config.h());
  };

  const int threads = std::max(1, options.parallelism);
  if (threads == 1) {
    for (long r = 0; r < reps; ++r) worker_body(r);
  } else {
    std::atomic<long> next{0};
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        for (;;) {
          const long r = next.fetch_add(1);
          if (r >= reps) return;
          worker_body(r);
        }
      });
    }
    for (auto& th : pool) th.join();
  }

  // Fixed-order reduction keeps the report identical across thread counts.
  MonteCarloReport report;
  report.cell = cell;
  report.reps = reps;
  report.seed = seed;
  double sum = 0.0, sum_sq = 0.0, sta_sum = 0.0;
  long in90 = 0, in95 = 0, in99 = 0;
  for (long r = 0; r < reps; ++r) {
    sum += rb[r];
    sum_sq += rb[r] * rb[r];
    sta_sum += sta[r];
    if (std::abs(sta[r]) <= kQ90) ++in90;
    if (std::abs(sta[r]) <= kQ95) ++in95;
    if (std::abs(sta[r]) <= kQ99) ++in99;
  }
  report.rb_mean = sum / reps;
  report.mse = sum_sq / reps;
  report.sd = reps > 1 ? std::sqrt((sum_sq - sum * sum / reps) / (reps - 1))
                       : 0.0;
  report.sta2_mean = sta_sum / reps;
  report.cov90 = 100.0 * in90 / reps;
  report.cov95 = 100.0 * in95 / reps;
  report.cov99 = 100.0 * in99 / reps;
  if (options.keep_studentized) report.studentized_samples = std::move(sta);
  report.runtime_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start)
          .count();
  return report;
}

}  // namespace spotvol::bench
