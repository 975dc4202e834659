#include "spotvol/simulate.hpp"

#include <cmath>
#include <numbers>

namespace spotvol {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::uint64_t mix64(std::uint64_t a, std::uint64_t b) {
  std::uint64_t z = a + 0x9e3779b97f4a7c15ULL + b;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t replication,
                     StreamTag tag)
    : gen_(mix64(mix64(seed, replication),
                 static_cast<std::uint64_t>(tag))) {}

double RngStream::uniform() {
  // 53-bit mantissa, shifted into (0,1] so log() is always finite.
  return (static_cast<double>(gen_() >> 11) + 1.0) * 0x1.0p-53;
}

double RngStream::normal() {
  const double u1 = uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
}

double RngStream::exponential() { return -std::log(uniform()); }

long RngStream::poisson(double mean) {
  if (!(mean >= 0.0)) throw std::invalid_argument("poisson: mean must be >= 0");
  long total = 0;
  // Knuth's product method is exact but underflows for large means; split
  // the mean into moderate chunks (Poisson is additive).
  while (mean > 0.0) {
    const double chunk = std::min(mean, 30.0);
    mean -= chunk;
    const double limit = std::exp(-chunk);
    double prod = uniform();
    long k = 0;
    while (prod > limit) {
      ++k;
      prod *= uniform();
    }
    total += k;
  }
  return total;
}

double RngStream::gamma(double shape, double rate) {
  if (!(shape > 0.0) || !(rate > 0.0))
    throw std::invalid_argument("gamma: shape and rate must be positive");
  double boost = 1.0;
  if (shape < 1.0) {
    boost = std::pow(uniform(), 1.0 / shape);
    shape += 1.0;
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = uniform();
    if (u < 1.0 - 0.0331 * x * x * x * x) return boost * d * v / rate;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v)))
      return boost * d * v / rate;
  }
}

void HestonParams::validate() const {
  if (!(kappa > 0.0)) throw std::invalid_argument("heston.kappa: must be > 0");
  if (!(theta_bar > 0.0))
    throw std::invalid_argument("heston.theta_bar: must be > 0");
  if (!(vol_of_vol >= 0.0))
    throw std::invalid_argument("heston.vol_of_vol: must be >= 0");
  if (!(rho_leverage >= -1.0 && rho_leverage <= 1.0))
    throw std::invalid_argument("heston.rho_leverage: must lie in [-1,1]");
}

void SimConfig::validate() const {
  if (n < 2) throw std::invalid_argument("n: must be >= 2");
  if (!(horizon > 0.0)) throw std::invalid_argument("horizon: must be > 0");
  heston.validate();
  jumps.validate();
  noise.validate();
}

SimConfig SimConfig::reference_design(double beta1, double sigma_eps,
                                    int noise_d_n, double noise_s,
                                    std::size_t n) {
  SimConfig cfg;
  cfg.n = n;
  cfg.jumps.stable_components = {{beta1, 0.15}, {1.0, 0.05}};
  cfg.jumps.poisson = PoissonJumps{3.0, 0.0, 1.0};
  cfg.noise = NoiseSpec{sigma_eps, noise_d_n, noise_s};
  cfg.validate();
  return cfg;
}

double sample_sigma0(const HestonParams& p, RngStream& rng) {
  // The stationary law degenerates to the mean-reversion level when the
  // variance diffusion is switched off.
  if (p.vol_of_vol == 0.0) return p.theta_bar;
  const double rate = 2.0 * p.kappa / (p.vol_of_vol * p.vol_of_vol);
  const double shape = p.theta_bar * rate;
  return rng.gamma(shape, rate);
}

void simulate_heston(const SimConfig& cfg, RngStream& brownian,
                     double sigma0_sq, std::vector<double>& logprice_cont,
                     std::vector<double>& spot_var) {
  const std::size_t n = cfg.n;
  const double dt = cfg.horizon / static_cast<double>(n);
  const double sq_dt = std::sqrt(dt);
  const double rho = cfg.heston.rho_leverage;
  const double rho_orth = std::sqrt(1.0 - rho * rho);

  logprice_cont.assign(n + 1, 0.0);
  spot_var.assign(n + 1, 0.0);
  logprice_cont[0] = cfg.x0;
  spot_var[0] = sigma0_sq;

  double v = sigma0_sq;
  double x = cfg.x0;
  for (std::size_t i = 0; i < n; ++i) {
    const double z_vol = brownian.normal();
    const double z_orth = brownian.normal();
    const double z_price = rho * z_vol + rho_orth * z_orth;
    const double v_pos = std::max(v, 0.0);
    const double sigma = std::sqrt(v_pos);
    x += cfg.drift * dt + sigma * sq_dt * z_price;
    v += cfg.heston.kappa * (cfg.heston.theta_bar - v_pos) * dt +
         cfg.heston.vol_of_vol * sigma * sq_dt * z_vol;
    logprice_cont[i + 1] = x;
    spot_var[i + 1] = std::max(v, 0.0);
  }
}

double sample_stable_increment(double beta, double scale_time, RngStream& rng) {
  if (!(beta > 0.0 && beta <= 2.0))
    throw std::invalid_argument("beta: must lie in (0,2]");
  if (!(scale_time >= 0.0))
    throw std::invalid_argument("scale_time: must be >= 0");
  if (beta == 2.0) {
    // CF exp(-u^2) is N(0,2).
    return std::sqrt(2.0 * scale_time) * rng.normal();
  }
  const double theta = std::numbers::pi * (rng.uniform() - 0.5);
  double s;
  if (std::abs(beta - 1.0) < 1e-12) {
    s = std::tan(theta);
  } else {
    const double e = rng.exponential();
    s = std::sin(beta * theta) / std::pow(std::cos(theta), 1.0 / beta) *
        std::pow(std::cos((1.0 - beta) * theta) / e, (1.0 - beta) / beta);
  }
  return std::pow(scale_time, 1.0 / beta) * s;
}

std::vector<double> compound_poisson(double intensity, double horizon,
                                     double jump_mean, double jump_std,
                                     std::size_t n, RngStream& rng) {
  std::vector<double> path(n + 1, 0.0);
  if (intensity == 0.0) return path;
  const double dt = horizon / static_cast<double>(n);
  const long count = rng.poisson(intensity * horizon);
  for (long k = 0; k < count; ++k) {
    const double t = rng.uniform() * horizon;
    const double size = jump_mean + jump_std * rng.normal();
    // The jump lands at the first grid point at or after t.
    auto idx = static_cast<std::size_t>(std::ceil(t / dt));
    if (idx > n) idx = n;
    if (idx == 0) idx = 1;
    path[idx] += size;
  }
  for (std::size_t i = 1; i <= n; ++i) path[i] += path[i - 1];
  return path;
}

std::vector<double> ma_noise(const NoiseSpec& spec, std::size_t n,
                             RngStream& rng) {
  spec.validate();
  const int d = spec.d_n;
  std::vector<double> a(d + 1, 0.0);
  a[0] = 1.0;
  double prod = 1.0;
  for (int j = 1; j <= d; ++j) {
    prod *= (j - 1 + spec.s) / j;  // a_j = s(1+s)...(j-1+s)/j!
    a[j] = prod;
  }
  // Current draws come first so that s = 0 (all a_j = 0) reproduces the
  // i.i.d. stream verbatim; the burn-in pre-samples follow and make chi_0
  // stationary.
  std::vector<double> cur(n + 1);
  for (auto& v : cur) v = rng.normal();
  std::vector<double> pre(d + 1, 0.0);
  for (int k = 1; k <= d; ++k) pre[k] = rng.normal();
  std::vector<double> eps(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    double chi = cur[i];
    for (int j = 1; j <= d; ++j) {
      chi += a[j] * (i >= static_cast<std::size_t>(j) ? cur[i - j]
                                                      : pre[j - i]);
    }
    eps[i] = spec.sigma_eps * chi;
  }
  return eps;
}

SimPath simulate_full(const SimConfig& cfg, std::uint64_t replication,
                      bool keep_components) {
  cfg.validate();
  const std::size_t n = cfg.n;
  const double dt = cfg.horizon / static_cast<double>(n);

  RngStream start_stream(cfg.seed, replication, StreamTag::sigma0);
  RngStream brownian(cfg.seed, replication, StreamTag::brownian);
  const double sigma0_sq = sample_sigma0(cfg.heston, start_stream);

  SimPath path;
  simulate_heston(cfg, brownian, sigma0_sq, path.clean, path.spot_var);

  std::vector<double> stable(n + 1, 0.0);
  for (std::size_t k = 0; k < cfg.jumps.stable_components.size(); ++k) {
    const auto& comp = cfg.jumps.stable_components[k];
    if (comp.gamma == 0.0) continue;
    RngStream stream(cfg.seed, replication,
                     static_cast<StreamTag>(
                         static_cast<std::uint64_t>(StreamTag::stable_base) + k));
    double level = 0.0;
    for (std::size_t i = 1; i <= n; ++i) {
      level += comp.gamma * sample_stable_increment(comp.beta, dt, stream);
      stable[i] += level;
    }
  }

  std::vector<double> cp(n + 1, 0.0);
  if (cfg.jumps.poisson && cfg.jumps.poisson->intensity > 0.0) {
    RngStream stream(cfg.seed, replication, StreamTag::poisson);
    cp = compound_poisson(cfg.jumps.poisson->intensity, cfg.horizon,
                          cfg.jumps.poisson->jump_mean,
                          cfg.jumps.poisson->jump_std, n, stream);
  }

  std::vector<double> eps(n + 1, 0.0);
  if (cfg.noise.sigma_eps > 0.0) {
    RngStream stream(cfg.seed, replication, StreamTag::noise);
    eps = ma_noise(cfg.noise, n, stream);
  }

  std::vector<double> continuous;
  if (keep_components) continuous = path.clean;
  path.noisy.resize(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    path.clean[i] += stable[i] + cp[i];
    path.noisy[i] = path.clean[i] + eps[i];
  }
  if (keep_components) {
    path.components = SimPathComponents{std::move(continuous),
                                        std::move(stable), std::move(cp),
                                        std::move(eps)};
  }
  return path;
}

}  // namespace spotvol
