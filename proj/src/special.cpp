#include "spotvol/special.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace spotvol {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kCut = 200.0 * kPi;

// Gauss-Legendre 20-point rule on [-1,1], positive nodes and weights.
constexpr int kGlHalf = 10;
constexpr double kGlNode[kGlHalf] = {
    0.0765265211334973, 0.2277858511416451, 0.3737060887154195,
    0.5108670019508271, 0.6360536807265150, 0.7463319064601508,
    0.8391169718222188, 0.9122344282513259, 0.9639719272779138,
    0.9931285991850949};
constexpr double kGlWeight[kGlHalf] = {
    0.1527533871307258, 0.1491729864726037, 0.1420961093183820,
    0.1316886384491766, 0.1181945319615184, 0.1019301198172404,
    0.0832767415767048, 0.0626720483341091, 0.0406014298003869,
    0.0176140071391521};

template <typename F>
double gauss_segment(const F& f, double lo, double hi) {
  const double mid = 0.5 * (lo + hi);
  const double rad = 0.5 * (hi - lo);
  double acc = 0.0;
  for (int i = 0; i < kGlHalf; ++i) {
    acc += kGlWeight[i] * (f(mid - rad * kGlNode[i]) + f(mid + rad * kGlNode[i]));
  }
  return acc * rad;
}

// One segment per half period keeps the oscillation trivially resolved.
template <typename F>
double gauss_to_cut(const F& f, double lo) {
  double acc = 0.0;
  double a = lo;
  while (a < kCut - 1e-12) {
    const double b = std::min(a + kPi, kCut);
    acc += gauss_segment(f, a, b);
    a = b;
  }
  return acc;
}

// integral over (0,1] of sin(x)/x^beta via the sine series; terms decay
// factorially.
double sine_head(double beta) {
  double acc = 0.0;
  double fact = 1.0;  // (2k+1)!
  for (int k = 0; k < 12; ++k) {
    if (k > 0) fact *= (2.0 * k) * (2.0 * k + 1.0);
    const double term = 1.0 / ((2.0 * k + 2.0 - beta) * fact);
    acc += (k % 2 == 0) ? term : -term;
  }
  return acc;
}

// integral over (0,1] of (1-cos(x))/x^beta via the cosine series.
double cosine_head(double beta) {
  double acc = 0.0;
  double fact = 1.0;  // (2k)!
  for (int k = 1; k < 13; ++k) {
    fact *= (2.0 * k - 1.0) * (2.0 * k);
    const double term = 1.0 / ((2.0 * k + 1.0 - beta) * fact);
    acc += (k % 2 == 1) ? term : -term;
  }
  return acc;
}

// integral over [M,inf) of sin(x)/x^s by repeated integration by parts;
// the dropped remainder is O(M^(-s-6)).
double sine_tail(double s, double m) {
  const double sn = std::sin(m);
  const double cs = std::cos(m);
  double acc = 0.0;
  double coef = 1.0;
  double power = std::pow(m, -s);
  double sk = s;
  for (int round = 0; round < 3; ++round) {
    acc += coef * (cs * power + sk * sn * power / m);
    coef *= -sk * (sk + 1.0);
    power /= m * m;
    sk += 2.0;
  }
  return acc;
}

// integral over [M,inf) of cos(x)/x^s: parts once, then the sine tail.
double cosine_tail(double s, double m) {
  return -std::sin(m) * std::pow(m, -s) + s * sine_tail(s + 1.0, m);
}

}  // namespace

double special_c(double beta) {
  if (!(beta > 0.0 && beta < 2.0))
    throw std::invalid_argument("special_c: beta must lie in (0,2)");
  const double mid = gauss_to_cut(
      [beta](double x) { return std::sin(x) * std::pow(x, -beta); }, 1.0);
  return sine_head(beta) + mid + sine_tail(beta, kCut);
}

double special_d(double beta) {
  if (!(beta > 1.0 && beta < 2.0))
    throw std::invalid_argument("special_d: beta must lie in (1,2)");
  const double mid = gauss_to_cut(
      [beta](double x) { return (1.0 - std::cos(x)) * std::pow(x, -beta); },
      1.0);
  // Split the tail: the 1/x^beta part is exact, the cosine part asymptotic.
  const double tail =
      std::pow(kCut, 1.0 - beta) / (beta - 1.0) - cosine_tail(beta, kCut);
  return cosine_head(beta) + mid + tail;
}

}  // namespace spotvol
