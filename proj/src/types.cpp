#include "spotvol/types.hpp"

#include <cmath>
#include <sstream>

namespace spotvol {

namespace {

constexpr int kRiemannPoints = 10000;

// Midpoint Riemann sum of f over [a,b].
double riemann(const std::function<double(double)>& f, double a, double b,
               int points = kRiemannPoints) {
  const double step = (b - a) / points;
  double acc = 0.0;
  for (int i = 0; i < points; ++i) {
    acc += f(a + (i + 0.5) * step);
  }
  return acc * step;
}

}  // namespace

WeightFunction::WeightFunction(std::string name, std::function<double(double)> g)
    : name_(std::move(name)), g_(std::move(g)) {
  if (!g_) throw std::invalid_argument("weight: evaluator must be callable");
  if (g_(0.0) != 0.0 || g_(1.0) != 0.0)
    throw std::invalid_argument("weight: g(0) and g(1) must be exactly 0");
  for (int i = 0; i < kRiemannPoints; ++i) {
    const double x = (i + 0.5) / kRiemannPoints;
    if (!(g_(x) >= 0.0))
      throw std::invalid_argument("weight: g must be nonnegative on [0,1]");
  }
  const double l2 = riemann([this](double x) { return g_(x) * g_(x); }, 0.0, 1.0);
  if (!(l2 > 0.0))
    throw std::invalid_argument("weight: integral of g^2 over [0,1] must be positive");
}

WeightFunction WeightFunction::triangle() {
  return WeightFunction("triangle",
                        [](double x) { return std::min(x, 1.0 - x); });
}

WeightFunction WeightFunction::by_name(const std::string& name) {
  if (name == "triangle") return triangle();
  throw std::invalid_argument("weight: unknown name '" + name + "'");
}

KernelSpec::KernelSpec(std::string name, double support_a, double support_b,
                       std::function<double(double)> k)
    : name_(std::move(name)), a_(support_a), b_(support_b), k_(std::move(k)) {
  if (!k_) throw std::invalid_argument("kernel: evaluator must be callable");
  if (!(a_ < b_)) throw std::invalid_argument("kernel: support must satisfy a < b");
  double mass = 0.0;
  const double step = (b_ - a_) / kRiemannPoints;
  for (int i = 0; i < kRiemannPoints; ++i) {
    const double v = k_(a_ + (i + 0.5) * step);
    if (!(v >= 0.0))
      throw std::invalid_argument("kernel: K must be nonnegative on its support");
    mass += v;
  }
  mass *= step;
  if (std::abs(mass - 1.0) > 1e-4)
    throw std::invalid_argument("kernel: Riemann mass over [a,b] is " +
                                std::to_string(mass) + ", expected 1 within 1e-4");
  const double l2 = riemann([this](double x) { return k_(x) * k_(x); }, a_, b_);
  if (!std::isfinite(l2))
    throw std::invalid_argument("kernel: integral of K^2 must be finite");
}

KernelSpec KernelSpec::by_name(const std::string& name) {
  if (name == "k1" || name == "uniform") {
    return KernelSpec(name, -1.0, 1.0, [](double) { return 0.5; });
  }
  if (name == "k2") {
    return KernelSpec(name, -1.0, 1.0,
                      [](double x) { return 0.75 * (1.0 - x * x); });
  }
  if (name == "k3") {
    return KernelSpec(name, -1.0, 1.0, [](double x) {
      const double q = 1.0 - x * x;
      return 15.0 / 16.0 * q * q;
    });
  }
  if (name == "k4") {
    return KernelSpec(name, -1.0, 1.0, [](double x) {
      const double q = 1.0 - x * x;
      return 35.0 / 32.0 * q * q * q;
    });
  }
  if (name == "onesided") {
    // Backward-looking indicator; only history enters the estimate.
    return KernelSpec(name, -1.0, 0.0,
                      [](double x) { return x < 0.0 ? 1.0 : 0.0; });
  }
  throw std::invalid_argument("kernel: unknown name '" + name + "'");
}

ObservationSeries::ObservationSeries(std::vector<double> values, double horizon)
    : values_(std::move(values)), horizon_(horizon) {
  if (values_.size() < 3)
    throw std::invalid_argument("series: need at least n+1 = 3 observations");
  if (!(horizon_ > 0.0))
    throw std::invalid_argument("series: horizon T must be positive");
  for (double v : values_) {
    if (!std::isfinite(v))
      throw std::invalid_argument("series: all values must be finite");
  }
}

DebiasSpec DebiasSpec::ratio_spec(double lambda) {
  DebiasSpec d;
  d.method = DebiasMethod::ratio;
  d.lambda = lambda;
  return d;
}

DebiasSpec DebiasSpec::iterative_spec(double lambda, double xi, int iterations) {
  DebiasSpec d;
  d.method = DebiasMethod::iterative;
  d.lambda = lambda;
  d.xi = xi;
  d.iterations = iterations;
  return d;
}

EstimatorConfig::EstimatorConfig(int p_n, double h, std::optional<double> u,
                                 int d_n, KernelSpec kernel,
                                 WeightFunction weight, DebiasSpec debias)
    : p_n_(p_n),
      h_(h),
      u_(u),
      d_n_(d_n),
      kernel_(std::move(kernel)),
      weight_(std::move(weight)),
      debias_(debias) {
  if (p_n_ < 2) throw std::invalid_argument("p_n: must be >= 2");
  if (!(h_ > 0.0)) throw std::invalid_argument("h: bandwidth must be positive");
  if (u_ && *u_ == 0.0) throw std::invalid_argument("u: must be nonzero");
  if (d_n_ < 0) throw std::invalid_argument("d_n: must be >= 0");
  if (debias_.method != DebiasMethod::none) {
    if (!(debias_.lambda > 1.0))
      throw std::invalid_argument("debias.lambda: must be > 1");
  }
  if (debias_.method == DebiasMethod::iterative) {
    if (!(debias_.xi > 0.0))
      throw std::invalid_argument("debias.xi: must be > 0");
    if (debias_.iterations < 1)
      throw std::invalid_argument("debias.iterations: must be >= 1");
  }
}

void EstimatorConfig::check_against(const ObservationSeries& obs) const {
  const std::size_t n = obs.increments();
  if (static_cast<std::size_t>(p_n_) > n / 2)
    throw std::invalid_argument("p_n: must be <= n/2");
  if (!(h_ < obs.horizon()))
    throw std::invalid_argument("h: bandwidth must be < horizon T");
  if (static_cast<std::size_t>(d_n_) + 1 >= n)
    throw std::invalid_argument("d_n: too large for series length");
}

void JumpSpec::validate() const {
  double prev = 2.0;
  for (const auto& c : stable_components) {
    if (!(c.beta > 0.0 && c.beta <= 2.0))
      throw std::invalid_argument("jumps.beta: must lie in (0,2]");
    if (!(c.beta < prev))
      throw std::invalid_argument("jumps.beta: must be strictly decreasing");
    if (!(c.gamma >= 0.0))
      throw std::invalid_argument("jumps.gamma: must be >= 0");
    prev = c.beta;
  }
  if (poisson && !(poisson->intensity >= 0.0))
    throw std::invalid_argument("jumps.poisson.intensity: must be >= 0");
  if (poisson && !(poisson->jump_std >= 0.0))
    throw std::invalid_argument("jumps.poisson.jump_std: must be >= 0");
}

void NoiseSpec::validate() const {
  if (!(sigma_eps >= 0.0))
    throw std::invalid_argument("noise.sigma_eps: must be >= 0");
  if (d_n < 0) throw std::invalid_argument("noise.d_n: must be >= 0");
  if (!(std::abs(s) < 0.5))
    throw std::invalid_argument("noise.s: must satisfy |s| < 0.5");
}

std::vector<std::string> validate_rate_conditions(const EstimatorConfig& config,
                                                  std::size_t n,
                                                  RateRegime regime) {
  std::vector<std::string> warnings;
  const double dn = 1.0 / static_cast<double>(n);  // grid step with T = 1
  const double pn_dn = config.p_n() * dn;
  const double ratio = config.h() / pn_dn;

  if (ratio < 5.0) {
    std::ostringstream os;
    os << "only ~" << static_cast<long>(std::floor(ratio))
       << " pre-averaged points in window (h/(p_n*delta_n) = " << ratio
       << " < 5)";
    warnings.push_back(os.str());
  }
  if (config.h() >= 1.0) {
    warnings.push_back("bandwidth h is not small relative to the horizon; "
                       "the h -> 0 regime does not apply");
  }

  const double pn2_dn = static_cast<double>(config.p_n()) * config.p_n() * dn;
  if (regime == RateRegime::consistency) {
    if (pn2_dn >= std::pow(static_cast<double>(n), 1.0 / 3.0)) {
      warnings.push_back("p_n^2*delta_n is not small against n^(1/3); "
                         "consistency rate condition strained");
    }
  } else {
    if (pn2_dn >= std::pow(static_cast<double>(n), 1.0 / 5.0)) {
      warnings.push_back("p_n^2*delta_n is not small against n^(1/5); "
                         "CLT rate condition strained");
    }
  }
  if (config.d_n() > config.p_n() / 2) {
    warnings.push_back("noise dependence span d_n exceeds p_n/2; "
                       "pre-averaging window barely covers the dependence");
  }
  return warnings;
}

}  // namespace spotvol
