#pragma once

#include <functional>
#include <vector>

#include "spotvol/preavg.hpp"
#include "spotvol/types.hpp"

namespace spotvol {

/// Kernel-weighted empirical characteristic function of the normalized
/// pre-averaged increments,
///   S_{tau,n}(u,h) = F_S * p_n*delta_n * sum_j K_h(j*p_n*delta_n - tau)
///                    * cos(u * bar_j / sqrt(phi2 * p_n * delta_n)),
/// with F_S normalizing the in-window kernel weights to total mass one.
double ecf_stat(const preavg::PreAveragedSeries& pre, double tau, double u,
                double h, const KernelSpec& kernel);

/// Kernel estimator of w_tau^2 * rho(j) from spanned increments
/// D_{i,j}Y = Y_{t_{i+j-1}} - Y_{t_{i-1}}; symmetric in the sign of j.
double noise_var_lag(const ObservationSeries& obs, double tau, double h, int j,
                     int d_n, const KernelSpec& kernel);

/// Aggregate noise-variance estimator targeting psi^n * w_tau^2: the
/// lag-grouped form of the weight-increment double sum over noise_var_lag.
double noise_var_hat(const ObservationSeries& obs, double tau, double h,
                     int d_n, const WeightFunction& g, int p_n,
                     const KernelSpec& kernel);

/// Data-driven ECF argument:
///   (log n)^exponent / sqrt(-2 log(clamp(ecf_at_one, 1/n, (n-1)/n))).
/// The default exponent matches the reference tuning; slower-decay regime
/// studies can override it.
double select_u(std::size_t n, double ecf_at_one,
                double log_exponent = -1.0 / 24.0);

/// Spot variance estimate at tau.  Resolves AUTO u via select_u, clamps the
/// ECF into [1/n, (n-1)/n], removes the noise term v_n * noise_var_hat, and
/// applies the configured de-biasing.
SpotVolEstimate spot_vol(const ObservationSeries& obs, double tau,
                         const EstimatorConfig& config);

//
// Jump-bias model: the leading bias of the log-ECF estimator caused by
// infinite-variation stable-like jump components.
//
struct BiasComponent {
  double beta;         // activity index
  double gamma_plus;   // scale of the positive-jump part (tail-normalized)
  double gamma_minus;  // scale of the negative-jump part (tail-normalized)
};

class BiasModel {
 public:
  /// components ordered largest index first: 1 <= beta_K <= ... <=
  /// beta_1 < 2, passed largest first.  pn_dn = p_n * delta_n.
  static BiasModel create(std::vector<BiasComponent> components,
                          const WeightFunction& g, int p_n, double pn_dn);

  /// Builds the model for symmetric components whose CF at t=1 is
  /// exp(-|u*gamma|^beta): converts the CF scale to the tail-normalized
  /// gamma+- = gamma / (2 C(beta))^(1/beta) used by the bias formula.
  static BiasModel from_cf_symmetric(const std::vector<StableComponent>& comps,
                                     const WeightFunction& g, int p_n,
                                     double pn_dn);

  bool symmetric() const;

  struct Term {
    double beta;
    double gamma_plus;
    double gamma_minus;
    double phi_beta;  // phi_{beta}^n for the weight in use
    double c_k;       // C(beta)
    double d_k;       // D(beta); NaN when unused (symmetric component)
  };

  const std::vector<Term>& terms() const { return terms_; }
  double phi2() const { return phi2_; }
  double pn_dn() const { return pn_dn_; }

 private:
  std::vector<Term> terms_;
  double phi2_ = 0.0;
  double pn_dn_ = 0.0;
};

/// b_{tau,n}(u): cosine part from C(beta), log-cos part from D(beta); the
/// latter vanishes for symmetric components.
double bias_term(const BiasModel& model, double u);

struct DebiasResult {
  double corrected = 0.0;
  double correction = 0.0;  // estimate of the bias that was removed
};

/// Single-component de-biasing via the ratio
///   B = (f(l*u)-f(u))^2 / (f(l^2*u) - 2 f(l*u) + f(u)),
/// zero when the denominator vanishes.
DebiasResult debias_ratio(const std::function<double(double)>& est_fn, double u,
                          double lambda);

/// Iterative de-biasing: level i at argument v adds v^2 * rate_scale * xi and
/// subtracts the level-(i-1) ratio; returns the level-K value at u.
/// rate_scale = sqrt(p_n * delta_n / h).
double debias_iterative(const std::function<double(double)>& est_fn, double u,
                        double lambda, double xi, int iterations,
                        double rate_scale);

/// Studentized deviation: sqrt(h/(p_n*delta_n)) * (sigma2_hat - truth - bias)
/// / (sqrt(2*k2) * total_var_bar).  bias = 0 gives the uncorrected statistic.
double studentized(const SpotVolEstimate& est, double true_sigma2, double bias,
                   double k2, int p_n, double delta_n, double h);

/// F_S-adjusted Riemann sum of K^2 over the pre-averaged index grid.
double k2_riemann(const KernelSpec& kernel, double tau, double h, int p_n,
                  double delta_n, std::size_t n);

}  // namespace spotvol
