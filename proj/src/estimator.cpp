#include "spotvol/estimator.hpp"

#include <cmath>
#include <limits>

#include "spotvol/special.hpp"

namespace spotvol {

namespace {

double clamp_ecf(double s, std::size_t n) {
  const double lo = 1.0 / static_cast<double>(n);
  const double hi = (static_cast<double>(n) - 1.0) / static_cast<double>(n);
  return std::min(std::max(s, lo), hi);
}

double sign_pow(double x, double p) {
  return x >= 0.0 ? std::pow(x, p) : -std::pow(-x, p);
}

// Ratio with the vanishing-denominator rule: exact zero, plus a relative
// guard against catastrophic cancellation around base.
double guarded_ratio(double num, double den, double base) {
  if (den == 0.0) return 0.0;
  if (std::abs(den) < 1e-12 * std::abs(base)) return 0.0;
  return num * num / den;
}

}  // namespace

double ecf_stat(const preavg::PreAveragedSeries& pre, double tau, double u,
                double h, const KernelSpec& kernel) {
  if (u == 0.0) throw std::invalid_argument("u: must be nonzero");
  if (!(h > 0.0)) throw std::invalid_argument("h: must be positive");
  const double pd = pre.p_n * pre.delta_n;
  const double scale = std::sqrt(pre.phi2 * pd);
  double weight_sum = 0.0;
  double acc = 0.0;
  // The p_n*delta_n/h prefactors cancel inside the F_S normalization.
  for (std::size_t j = 1; j <= pre.values.size(); ++j) {
    const double w = kernel((static_cast<double>(j) * pd - tau) / h);
    if (w == 0.0) continue;
    weight_sum += w;
    acc += w * std::cos(u * pre.values[j - 1] / scale);
  }
  if (!(weight_sum > 0.0))
    throw NumericError("no pre-averaged observations in bandwidth");
  return acc / weight_sum;
}

double noise_var_lag(const ObservationSeries& obs, double tau, double h, int j,
                     int d_n, const KernelSpec& kernel) {
  const std::size_t n = obs.increments();
  if (d_n < 0 || std::abs(j) > d_n)
    throw std::invalid_argument("j: lag must satisfy |j| <= d_n");
  if (static_cast<std::size_t>(d_n) + 1 >= n)
    throw std::invalid_argument("d_n: too large for series length");
  const int lag = std::abs(j);
  const double dt = obs.delta();
  const auto& y = obs.values();
  double weight_sum = 0.0;
  double acc = 0.0;
  for (std::size_t i = 1; i + static_cast<std::size_t>(d_n) + 1 <= n; ++i) {
    const double w = kernel((static_cast<double>(i) * dt - tau) / h);
    if (w == 0.0) continue;
    const double span = y[i + d_n] - y[i - 1];  // D_{i,d_n+1}Y
    double val = span * span;
    if (lag != 0) {
      const double part = y[i + lag - 1] - y[i - 1];  // D_{i,lag}Y
      val -= part * part;
    }
    weight_sum += w;
    acc += w * val;
  }
  if (!(weight_sum > 0.0)) throw NumericError("no observations in bandwidth");
  return 0.5 * acc / weight_sum;
}

double noise_var_hat(const ObservationSeries& obs, double tau, double h,
                     int d_n, const WeightFunction& g, int p_n,
                     const KernelSpec& kernel) {
  if (p_n < 2) throw std::invalid_argument("p_n: must be >= 2");
  // Weight increments dg_i = g((i+1)/p_n) - g(i/p_n), i = 0..p_n-1.
  std::vector<double> dg(p_n);
  double prev = 0.0;
  for (int i = 1; i <= p_n; ++i) {
    const double cur = (i == p_n) ? 0.0 : g(static_cast<double>(i) / p_n);
    dg[i - 1] = cur - prev;
    prev = cur;
  }
  // Group the (i1,i2) double sum by lag: c_j = sum_i dg_i dg_{i+j}.
  const int max_lag = std::min(d_n, p_n - 1);
  double acc = 0.0;
  for (int lag = 0; lag <= max_lag; ++lag) {
    double c = 0.0;
    for (int i = 0; i + lag < p_n; ++i) c += dg[i] * dg[i + lag];
    if (c == 0.0) continue;
    const double w2 = noise_var_lag(obs, tau, h, lag, d_n, kernel);
    acc += (lag == 0 ? c : 2.0 * c) * w2;
  }
  return p_n * acc;
}

double select_u(std::size_t n, double ecf_at_one, double log_exponent) {
  const double clamped = clamp_ecf(ecf_at_one, n);
  const double total_var = -2.0 * std::log(clamped);
  return std::pow(std::log(static_cast<double>(n)), log_exponent) /
         std::sqrt(total_var);
}

SpotVolEstimate spot_vol(const ObservationSeries& obs, double tau,
                         const EstimatorConfig& config) {
  config.check_against(obs);
  if (tau < 0.0 || tau > obs.horizon())
    throw std::invalid_argument("tau: must lie in [0,T]");

  const std::size_t n = obs.increments();
  const preavg::PreAveragedSeries pre =
      preavg::preaverage(obs, config.p_n(), config.weight());
  const double h = config.h();
  const double v_n = 1.0 / (pre.phi2 * config.p_n() * config.p_n() * pre.delta_n);
  const double noise_correction =
      v_n * noise_var_hat(obs, tau, h, config.d_n(), config.weight(),
                          config.p_n(), config.kernel());

  const double s_at_one =
      clamp_ecf(ecf_stat(pre, tau, 1.0, h, config.kernel()), n);
  const double total_var_bar = -2.0 * std::log(s_at_one);
  const double u =
      config.u() ? *config.u() : select_u(n, s_at_one);

  const auto raw_estimate = [&](double v) {
    const double s = clamp_ecf(ecf_stat(pre, tau, v, h, config.kernel()), n);
    return (-2.0 / (v * v)) * std::log(s) - noise_correction;
  };

  SpotVolEstimate out;
  out.tau = tau;
  out.u_used = u;
  out.noise_correction = noise_correction;
  out.total_var_bar = total_var_bar;
  const double s_raw = ecf_stat(pre, tau, u, h, config.kernel());
  const double s = clamp_ecf(s_raw, n);
  out.ecf_value = s;
  out.clamped = (s != s_raw);
  double sigma2 = (-2.0 / (u * u)) * std::log(s) - noise_correction;

  switch (config.debias().method) {
    case DebiasMethod::none:
      break;
    case DebiasMethod::ratio: {
      const DebiasResult r =
          debias_ratio(raw_estimate, u, config.debias().lambda);
      out.debias_correction = sigma2 - r.corrected;
      sigma2 = r.corrected;
      break;
    }
    case DebiasMethod::iterative: {
      const double rate_scale = std::sqrt(pre.p_n * pre.delta_n / h);
      const double corrected = debias_iterative(
          raw_estimate, u, config.debias().lambda, config.debias().xi,
          config.debias().iterations, rate_scale);
      out.debias_correction = sigma2 - corrected;
      sigma2 = corrected;
      break;
    }
  }
  out.sigma2_hat = sigma2;
  return out;
}

BiasModel BiasModel::create(std::vector<BiasComponent> components,
                            const WeightFunction& g, int p_n, double pn_dn) {
  if (!(pn_dn > 0.0)) throw std::invalid_argument("pn_dn: must be positive");
  double prev = 2.0;
  BiasModel model;
  model.phi2_ = preavg::phi(2.0, p_n, g);
  model.pn_dn_ = pn_dn;
  for (const auto& c : components) {
    if (!(c.beta >= 1.0 && c.beta < 2.0))
      throw std::invalid_argument("beta: components must lie in [1,2)");
    if (!(c.beta <= prev))
      throw std::invalid_argument("beta: components must be non-increasing");
    prev = c.beta;
    Term t;
    t.beta = c.beta;
    t.gamma_plus = c.gamma_plus;
    t.gamma_minus = c.gamma_minus;
    t.phi_beta = preavg::phi(c.beta, p_n, g);
    t.c_k = special_c(c.beta);
    if (c.gamma_plus == c.gamma_minus) {
      t.d_k = std::numeric_limits<double>::quiet_NaN();
    } else {
      if (c.beta <= 1.0)
        throw NumericError("asymmetric component requires beta > 1");
      t.d_k = special_d(c.beta);
    }
    model.terms_.push_back(t);
  }
  return model;
}

BiasModel BiasModel::from_cf_symmetric(
    const std::vector<StableComponent>& comps, const WeightFunction& g,
    int p_n, double pn_dn) {
  std::vector<BiasComponent> converted;
  converted.reserve(comps.size());
  for (const auto& c : comps) {
    const double gamma_eff =
        c.gamma * std::pow(2.0 * special_c(c.beta), -1.0 / c.beta);
    converted.push_back({c.beta, gamma_eff, gamma_eff});
  }
  return create(std::move(converted), g, p_n, pn_dn);
}

bool BiasModel::symmetric() const {
  for (const auto& t : terms_) {
    if (t.gamma_plus != t.gamma_minus) return false;
  }
  return true;
}

double bias_term(const BiasModel& model, double u) {
  if (u == 0.0) throw std::invalid_argument("u: must be nonzero");
  const double sqrt_phi2 = std::sqrt(model.phi2());
  double cos_part = 0.0;
  double phase = 0.0;
  for (const auto& t : model.terms()) {
    const double common = t.phi_beta *
                          std::pow(std::abs(u) / sqrt_phi2, t.beta) *
                          std::pow(model.pn_dn(), 1.0 - 0.5 * t.beta);
    cos_part += t.c_k * common *
                (std::pow(std::abs(t.gamma_plus), t.beta) +
                 std::pow(std::abs(t.gamma_minus), t.beta));
    // The phase vanishes for symmetric components: the negative-jump part is
    // subtracted, and the odd part of the exponent cancels.
    if (t.gamma_plus != t.gamma_minus) {
      phase += t.d_k * common *
               (sign_pow(t.gamma_plus, t.beta) - sign_pow(t.gamma_minus, t.beta));
    }
  }
  double log_cos = 0.0;
  if (phase != 0.0) {
    const double c = std::cos(phase);
    if (!(c > 0.0)) throw NumericError("bias model outside asymptotic regime");
    log_cos = std::log(c);
  }
  return (2.0 / (u * u)) * cos_part - (2.0 / (u * u)) * log_cos;
}

DebiasResult debias_ratio(const std::function<double(double)>& est_fn,
                          double u, double lambda) {
  if (!(lambda > 1.0)) throw std::invalid_argument("lambda: must be > 1");
  const double f0 = est_fn(u);
  const double f1 = est_fn(lambda * u);
  const double f2 = est_fn(lambda * lambda * u);
  const double correction = guarded_ratio(f1 - f0, f2 - 2.0 * f1 + f0, f0);
  return {f0 - correction, correction};
}

double debias_iterative(const std::function<double(double)>& est_fn, double u,
                        double lambda, double xi, int iterations,
                        double rate_scale) {
  if (!(lambda > 1.0)) throw std::invalid_argument("lambda: must be > 1");
  if (!(xi > 0.0)) throw std::invalid_argument("xi: must be > 0");
  if (iterations < 1) throw std::invalid_argument("iterations: must be >= 1");

  // Level i needs arguments u * lambda^j for j = 0..2*(K-i).
  std::vector<double> args(2 * iterations + 1);
  std::vector<double> vals(2 * iterations + 1);
  for (int j = 0; j <= 2 * iterations; ++j) {
    args[j] = u * std::pow(lambda, j);
    vals[j] = est_fn(args[j]);
  }
  for (int i = 1; i <= iterations; ++i) {
    const int top = 2 * (iterations - i);
    std::vector<double> next(top + 1);
    for (int j = 0; j <= top; ++j) {
      const double ratio = guarded_ratio(
          vals[j + 1] - vals[j], vals[j + 2] - 2.0 * vals[j + 1] + vals[j],
          vals[j]);
      next[j] = vals[j] + args[j] * args[j] * rate_scale * xi - ratio;
    }
    vals = std::move(next);
  }
  return vals[0];
}

double studentized(const SpotVolEstimate& est, double true_sigma2, double bias,
                   double k2, int p_n, double delta_n, double h) {
  if (!(k2 > 0.0)) throw std::invalid_argument("k2: must be positive");
  const double rate = std::sqrt(h / (p_n * delta_n));
  return rate * (est.sigma2_hat - true_sigma2 - bias) /
         (std::sqrt(2.0 * k2) * est.total_var_bar);
}

double k2_riemann(const KernelSpec& kernel, double tau, double h, int p_n,
                  double delta_n, std::size_t n) {
  const double pd = p_n * delta_n;
  const std::size_t blocks = n / static_cast<std::size_t>(p_n);
  double weight_sum = 0.0;
  double sq_sum = 0.0;
  for (std::size_t j = 1; j <= blocks; ++j) {
    const double w = kernel((static_cast<double>(j) * pd - tau) / h);
    weight_sum += w;
    sq_sum += w * w;
  }
  if (!(weight_sum > 0.0))
    throw NumericError("no pre-averaged observations in bandwidth");
  // sum_j (pd/h) (F_S K_j)^2 with F_S = 1 / ((pd/h) sum_j K_j).
  return (h / pd) * sq_sum / (weight_sum * weight_sum);
}

}  // namespace spotvol
