#pragma once

#include <algorithm>
#include <cmath>
#include <functional>

#include <Eigen/Dense>

#include "aaps/targets.hpp"

namespace testutil {

/// Central differences of the target potential, step h scaled by |x_i|.
inline Eigen::VectorXd numeric_gradient(const aaps::TargetDensity& t, const Eigen::VectorXd& x,
                                        double h = 1e-6) {
  Eigen::VectorXd g(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double step = h * std::max(1.0, std::abs(x[i]));
    Eigen::VectorXd a = x, b = x;
    a[i] += step;
    b[i] -= step;
    g[i] = (t.potential(a) - t.potential(b)) / (2 * step);
  }
  return g;
}

/// max_i |g_i - n_i| / max(1, |n_i|)
inline double gradient_error(const aaps::TargetDensity& t, const Eigen::VectorXd& x) {
  Eigen::VectorXd g;
  t.potential_and_gradient(x, g);
  const Eigen::VectorXd n = numeric_gradient(t, x);
  double worst = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    worst = std::max(worst, std::abs(g[i] - n[i]) / std::max(1.0, std::abs(n[i])));
  }
  return worst;
}

/// Standard normal CDF via erfc, independent of the library's own.
inline double phi_cdf(double t) { return 0.5 * std::erfc(-t / std::sqrt(2.0)); }

/// Two-sided Kolmogorov-Smirnov p-value (asymptotic series).
inline double ks_pvalue(double d, std::size_t n) {
  const double sn = std::sqrt(static_cast<double>(n));
  const double lambda = (sn + 0.12 + 0.11 / sn) * d;
  double sum = 0.0;
  for (int j = 1; j <= 100; ++j) {
    sum += 2.0 * ((j % 2) ? 1.0 : -1.0) * std::exp(-2.0 * j * j * lambda * lambda);
  }
  return std::clamp(sum, 0.0, 1.0);
}

/// Upper tail of the chi-square distribution (regularised gamma Q).
inline double chi2_sf(double x, double k) {
  const double a = k / 2.0, z = x / 2.0;
  if (z < a + 1.0) {
    double term = 1.0 / a, sum = term;
    for (int n = 1; n < 1000; ++n) {
      term *= z / (a + n);
      sum += term;
      if (term < sum * 1e-15) break;
    }
    return 1.0 - sum * std::exp(-z + a * std::log(z) - std::lgamma(a));
  }
  // Continued fraction (Lentz).
  double b = z + 1.0 - a, c = 1e300, d = 1.0 / b, h = d;
  for (int i = 1; i < 1000; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < 1e-300) d = 1e-300;
    c = b + an / c;
    if (std::abs(c) < 1e-300) c = 1e-300;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < 1e-15) break;
  }
  return std::exp(-z + a * std::log(z) - std::lgamma(a)) * h;
}

}  // namespace testutil
