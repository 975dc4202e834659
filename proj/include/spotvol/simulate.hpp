#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "spotvol/types.hpp"

namespace spotvol {

//
// Deterministic substream RNG: one independent stream per (seed, replication,
// component).  Replications and components never share a stream, so paths are
// reproducible regardless of evaluation order or thread count.
//
enum class StreamTag : std::uint64_t {
  sigma0 = 1,
  brownian = 2,    // leverage-correlated pair (price, vol)
  stable_base = 8, // component k uses stable_base + k
  poisson = 24,
  noise = 25,
};

class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t replication, StreamTag tag);

  /// Uniform on (0,1].
  double uniform();
  /// Standard normal (Box-Muller, one value per two uniforms).
  double normal();
  /// Exponential with unit mean.
  double exponential();
  /// Poisson count; exact for any mean (chunked Knuth).
  long poisson(double mean);
  /// Gamma(shape, rate), shape > 0 (Marsaglia-Tsang).
  double gamma(double shape, double rate);

 private:
  std::mt19937_64 gen_;
};

struct HestonParams {
  double kappa = 6.0;
  double theta_bar = 0.25;
  double vol_of_vol = 0.5;
  double rho_leverage = -0.3;

  void validate() const;
};

struct SimConfig {
  std::size_t n = 117000;
  double horizon = 1.0;
  double x0 = 5.49;
  double drift = 0.5;
  HestonParams heston;
  JumpSpec jumps;
  NoiseSpec noise;
  std::uint64_t seed = 0;

  void validate() const;

  /// The reference design: Heston + two symmetric stable components
  /// (beta1, 0.15) and (1.0, 0.05) + compound Poisson(3) N(0,1) jumps.
  static SimConfig reference_design(double beta1, double sigma_eps, int noise_d_n,
                                  double noise_s, std::size_t n = 117000);
};

struct SimPathComponents {
  std::vector<double> continuous;    // x0 + drift t + integral sigma dB
  std::vector<double> stable_jumps;  // sum_k gamma_k L^{(k)}
  std::vector<double> cp_jumps;
  std::vector<double> noise;
};

struct SimPath {
  std::vector<double> clean;     // latent log price X on the grid
  std::vector<double> noisy;     // Y = X + eps
  std::vector<double> spot_var;  // sigma^2_t on the grid
  std::optional<SimPathComponents> components;
};

/// sigma_0^2 from the stationary CIR law Gamma(shape 2 kappa theta/xi^2,
/// rate 2 kappa / xi^2); the reference design gives shape 12, rate 48.
double sample_sigma0(const HestonParams& p, RngStream& rng);

/// Full-truncation Euler for the CIR variance and the matching log-price
/// diffusion with leverage-correlated increments.  Returns x0 + drift t +
/// diffusion in logprice_cont and the variance path in spot_var.
void simulate_heston(const SimConfig& cfg, RngStream& brownian,
                     double sigma0_sq, std::vector<double>& logprice_cont,
                     std::vector<double>& spot_var);

/// Increment of a CF-normalized symmetric stable process over a time step:
/// scale_time^(1/beta) * S with E[exp(iuS)] = exp(-|u|^beta)
/// (Chambers-Mallows-Stuck polar transform).
double sample_stable_increment(double beta, double scale_time, RngStream& rng);

/// Cumulative compound Poisson path on the grid (n+1 values, piecewise
/// constant between jump bins).
std::vector<double> compound_poisson(double intensity, double horizon,
                                     double jump_mean, double jump_std,
                                     std::size_t n, RngStream& rng);

/// MA(d_n) microstructure noise, n+1 values:
/// eps_i = sigma_eps * (Z_i + sum_j a_j Z_{i-j}) with fractional-difference
/// coefficients a_j; d_n extra pre-samples make eps_0 stationary.  The MA
/// filter is not variance-normalized.
std::vector<double> ma_noise(const NoiseSpec& spec, std::size_t n,
                             RngStream& rng);

/// Assembles the full path for one replication from independent substreams.
SimPath simulate_full(const SimConfig& cfg, std::uint64_t replication = 0,
                      bool keep_components = false);

}  // namespace spotvol
