#pragma once

// Simple linear regression with Student-t p-values.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>

namespace topiclandscape::stats {

namespace detail {

// Continued fraction for I_x(a, b), modified Lentz.
inline double beta_continued_fraction(double x, double a, double b) {
  constexpr int kMaxIterations = 200;
  constexpr double kTolerance = 1e-12;
  constexpr double kTiny = 1e-300;

  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIterations; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < kTolerance) break;
  }
  return h;
}

}  // namespace detail

/// Regularized incomplete beta I_x(a, b) for x in [0, 1], a, b > 0.
inline double regularized_incomplete_beta(double x, double a, double b) {
  if (!(x >= 0.0 && x <= 1.0)) throw std::domain_error("incomplete beta: x outside [0, 1]");
  if (!(a > 0.0) || !(b > 0.0)) throw std::domain_error("incomplete beta: a and b must be > 0");
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                           a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(log_front);
  // The continued fraction converges fast only below the mean; reflect above.
  if (x < (a + 1.0) / (a + b + 2.0))
    return front * detail::beta_continued_fraction(x, a, b) / a;
  return 1.0 - front * detail::beta_continued_fraction(1.0 - x, b, a) / b;
}

/// Two-sided p-value of a t statistic with df degrees of freedom.
inline double student_t_two_sided_p(double t, double df) {
  if (!(df >= 1.0)) throw std::domain_error("student t: df must be >= 1");
  if (std::isnan(t)) return std::numeric_limits<double>::quiet_NaN();
  if (std::isinf(t)) return 0.0;
  const double x = df / (df + t * t);
  return regularized_incomplete_beta(x, df / 2.0, 0.5);
}

struct OlsFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  double t_stat = 0.0;
  double p_value = 1.0;
  std::size_t n = 0;
};

/// Least-squares line through (xs, ys). Needs n >= 3 and non-constant xs.
/// A constant response gives slope 0, r^2 0 and p 1.
inline OlsFit ols_fit(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw std::invalid_argument("ols: xs and ys differ in length");
  const std::size_t n = xs.size();
  if (n < 3) throw std::invalid_argument("ols: need at least 3 points");
  const auto nd = static_cast<double>(n);

  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= nd;
  my /= nd;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  bool constant_y = true;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = xs[i] - mx, dy = ys[i] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
    if (ys[i] != ys[0]) constant_y = false;
  }
  if (!(sxx > 0.0)) throw std::invalid_argument("ols: xs are constant");

  OlsFit fit;
  fit.n = n;
  if (constant_y) {
    fit.intercept = ys[0];
    return fit;
  }
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double sse = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = ys[i] - (fit.intercept + fit.slope * xs[i]);
    sse += r * r;
  }
  fit.r_squared = std::clamp(1.0 - sse / syy, 0.0, 1.0);
  const double df = nd - 2.0;
  const double se = std::sqrt(sse / df / sxx);
  if (se > 0.0) {
    fit.t_stat = fit.slope / se;
    fit.p_value = student_t_two_sided_p(fit.t_stat, df);
  } else {
    fit.t_stat = fit.slope == 0.0 ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(),
                                                        fit.slope);
    fit.p_value = fit.slope == 0.0 ? 1.0 : 0.0;
  }
  return fit;
}

}  // namespace topiclandscape::stats
