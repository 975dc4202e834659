#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace spotvol {

/// Malformed or inconsistent input data (CSV files, tick tapes, series).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Numerical failure at evaluation time (empty kernel window, bias model
/// outside its valid regime, ...).
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

//
// Pre-averaging weight function g on [0,1] with g(0)=g(1)=0.
//
class WeightFunction {
 public:
  WeightFunction(std::string name, std::function<double(double)> g);

  double operator()(double x) const { return g_(x); }
  const std::string& name() const { return name_; }

  /// g(x) = x ∧ (1−x).
  static WeightFunction triangle();
  /// Lookup of registered weights ("triangle").
  static WeightFunction by_name(const std::string& name);

 private:
  std::string name_;
  std::function<double(double)> g_;
};

//
// Smoothing kernel with compact support [a,b], nonnegative, unit mass.
// Evaluation outside [a,b] returns 0 by construction.
//
class KernelSpec {
 public:
  KernelSpec(std::string name, double support_a, double support_b,
             std::function<double(double)> k);

  double operator()(double x) const {
    return (x < a_ || x > b_) ? 0.0 : k_(x);
  }
  double support_a() const { return a_; }
  double support_b() const { return b_; }
  const std::string& name() const { return name_; }

  /// Registered kernels: "k1".."k4", "uniform" (= k1), "onesided".
  static KernelSpec by_name(const std::string& name);

 private:
  std::string name_;
  double a_, b_;
  std::function<double(double)> k_;
};

//
// Equidistant noisy log-price observations Y_{t_i}, i = 0..n, on [0,T].
//
class ObservationSeries {
 public:
  ObservationSeries(std::vector<double> values, double horizon);

  std::size_t increments() const { return values_.size() - 1; }  // n
  double horizon() const { return horizon_; }                    // T
  double delta() const { return horizon_ / static_cast<double>(increments()); }
  const std::vector<double>& values() const { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }

 private:
  std::vector<double> values_;
  double horizon_;
};

enum class DebiasMethod { none, ratio, iterative };

struct DebiasSpec {
  DebiasMethod method = DebiasMethod::none;
  double lambda = 2.0;  // argument scaling, > 1
  double xi = 1e-6;     // iterative regularizer, > 0
  int iterations = 1;   // iterative step count K

  static DebiasSpec none_spec() { return DebiasSpec{}; }
  static DebiasSpec ratio_spec(double lambda);
  static DebiasSpec iterative_spec(double lambda, double xi, int iterations);
};

//
// Tuning parameters of the spot volatility estimator.  u empty means the
// data-driven rule resolves it at estimation time.
//
class EstimatorConfig {
 public:
  EstimatorConfig(int p_n, double h, std::optional<double> u, int d_n,
                  KernelSpec kernel, WeightFunction weight,
                  DebiasSpec debias = DebiasSpec{});

  int p_n() const { return p_n_; }
  double h() const { return h_; }
  const std::optional<double>& u() const { return u_; }
  int d_n() const { return d_n_; }
  const KernelSpec& kernel() const { return kernel_; }
  const WeightFunction& weight() const { return weight_; }
  const DebiasSpec& debias() const { return debias_; }

  /// n-dependent hard invariants (p_n ≤ n/2, h < T); throws on violation.
  void check_against(const ObservationSeries& obs) const;

 private:
  int p_n_;
  double h_;
  std::optional<double> u_;
  int d_n_;
  KernelSpec kernel_;
  WeightFunction weight_;
  DebiasSpec debias_;
};

struct StableComponent {
  double beta;   // activity index in (0,2]
  double gamma;  // scale on the CF-normalized process, >= 0
};

struct PoissonJumps {
  double intensity = 0.0;  // per unit time
  double jump_mean = 0.0;
  double jump_std = 1.0;
};

struct JumpSpec {
  std::vector<StableComponent> stable_components;  // betas strictly decreasing
  std::optional<PoissonJumps> poisson;

  void validate() const;
};

struct NoiseSpec {
  double sigma_eps = 0.0;  // noise scale w, price units
  int d_n = 0;             // MA order; 0 = i.i.d. Gaussian
  double s = 0.0;          // fractional parameter, |s| < 0.5

  void validate() const;
};

struct SpotVolEstimate {
  double tau = 0.0;
  double sigma2_hat = 0.0;         // after de-biasing, if configured
  double noise_correction = 0.0;   // v_n · ŵ²_{τ,n}(h)
  double ecf_value = 0.0;          // clamped S_{τ,n}(u,h)
  double u_used = 0.0;
  bool clamped = false;            // raw S left [1/n, (n−1)/n]
  double debias_correction = 0.0;  // raw − corrected; 0 when debias = none
  double total_var_bar = 0.0;      // −2 log(clamped S_{τ,n}(1,h))
};

enum class RateRegime { consistency, clt_beta_le_1p5, clt_general };

/// Finite-n proxies for the asymptotic rate conditions.  Advisory only:
/// returns human-readable warnings, never rejects.
std::vector<std::string> validate_rate_conditions(const EstimatorConfig& config,
                                                  std::size_t n,
                                                  RateRegime regime);

}  // namespace spotvol
