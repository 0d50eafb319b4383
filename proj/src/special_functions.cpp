#include "spherefrac/special_functions.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "spherefrac/errors.hpp"

namespace spherefrac {

namespace {

// Stirling remainder lgamma(x) − [(x−½)log x − x + ½log 2π], x ≥ 10.
double lgamma_correction(double x) {
  const double x2 = 1.0 / (x * x);
  return (1.0 / 12.0 +
          x2 * (-1.0 / 360.0 +
                x2 * (1.0 / 1260.0 + x2 * (-1.0 / 1680.0 + x2 * (1.0 / 1188.0 + x2 * (-691.0 / 360360.0)))))) /
         x;
}

constexpr double kLogSqrt2Pi = 0.918938533204672741780329736406;

// Continued fraction for I_x(a,b), Numerical-Recipes form with modified Lentz.
double beta_continued_fraction(double a, double b, double x) {
  constexpr double tiny = 1e-300;
  constexpr double eps = 1e-16;
  const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < tiny) d = tiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= 10000; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < eps) return h;
  }
  throw NumericalError("incomplete beta continued fraction did not converge (a=" + std::to_string(a) +
                       ", b=" + std::to_string(b) + ", x=" + std::to_string(x) + ")");
}

void check_beta_args(double a, double b) {
  if (!(a > 0.0) || !(b > 0.0) || !std::isfinite(a) || !std::isfinite(b))
    throw DomainError("beta parameters must be positive and finite (a=" + std::to_string(a) +
                      ", b=" + std::to_string(b) + ")");
}

}  // namespace

double log_beta(double a, double b) {
  check_beta_args(a, b);
  const double p = std::min(a, b), q = std::max(a, b);
  if (p >= 10.0) {
    const double corr = lgamma_correction(p) + lgamma_correction(q) - lgamma_correction(p + q);
    return -0.5 * std::log(q) + kLogSqrt2Pi + corr + (p - 0.5) * std::log(p / (p + q)) +
           q * std::log1p(-p / (p + q));
  }
  if (q >= 10.0) {
    const double corr = lgamma_correction(q) - lgamma_correction(p + q);
    return std::lgamma(p) + corr + p - p * std::log(p + q) + (q - 0.5) * std::log1p(-p / (p + q));
  }
  return std::lgamma(p) + std::lgamma(q) - std::lgamma(p + q);
}

double beta(double a, double b) {
  check_beta_args(a, b);
  if (a == 1.0) return 1.0 / b;
  if (b == 1.0) return 1.0 / a;
  return std::exp(log_beta(a, b));
}

double incomplete_beta(double T, double a, double b) {
  check_beta_args(a, b);
  if (!(T >= 0.0 && T <= 1.0)) throw DomainError("incomplete beta needs T in [0,1], got " + std::to_string(T));
  if (T == 0.0) return 0.0;
  if (T == 1.0) return beta(a, b);
  const double log_front = a * std::log(T) + b * std::log1p(-T);
  if (T < (a + 1.0) / (a + b + 2.0)) return std::exp(log_front) * beta_continued_fraction(a, b, T) / a;
  return beta(a, b) - std::exp(log_front) * beta_continued_fraction(b, a, 1.0 - T) / b;
}

double regularized_incomplete_beta(double T, double a, double b) {
  check_beta_args(a, b);
  if (!(T >= 0.0 && T <= 1.0)) throw DomainError("incomplete beta needs T in [0,1], got " + std::to_string(T));
  if (T == 0.0) return 0.0;
  if (T == 1.0) return 1.0;
  const double log_front = a * std::log(T) + b * std::log1p(-T) - log_beta(a, b);
  if (T < (a + 1.0) / (a + b + 2.0)) return std::exp(log_front) * beta_continued_fraction(a, b, T) / a;
  return 1.0 - std::exp(log_front) * beta_continued_fraction(b, a, 1.0 - T) / b;
}

GaussRule gauss_legendre(int order) {
  if (order < 1) throw DomainError("Gauss-Legendre order must be >= 1");
  GaussRule rule;
  rule.nodes.resize(order);
  rule.weights.resize(order);
  const int half = (order + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < order; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
      }
      dp = order * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    // Recompute derivative at the converged root.
    double p0 = 1.0, p1 = 0.0;
    for (int j = 0; j < order; ++j) {
      const double p2 = p1;
      p1 = p0;
      p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
    }
    dp = order * (z * p0 - p1) / (z * z - 1.0);
    const double w = 2.0 / ((1.0 - z * z) * dp * dp);
    rule.nodes[i] = -z;
    rule.nodes[order - 1 - i] = z;
    rule.weights[i] = w;
    rule.weights[order - 1 - i] = w;
  }
  return rule;
}

}  // namespace spherefrac
