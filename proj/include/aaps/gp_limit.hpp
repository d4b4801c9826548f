#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "aaps/rng.hpp"
#include "aaps/targets.hpp"

namespace aaps {

/// Distribution of the squared inverse length scale nu of a component.
/// Only finitely supported or bounded laws are provided, so every moment
/// condition holds.
class PrecisionDistribution {
 public:
  /// nu equal to `value` with probability 1.
  static PrecisionDistribution constant(double value);
  /// nu = a with probability p_a, else b.
  static PrecisionDistribution two_point(double a, double b, double p_a = 0.5);
  /// nu ~ Unif(lo, hi).
  static PrecisionDistribution uniform(double lo, double hi);

  double sample(Rng& rng) const;
  double mean() const;
  double second_moment() const;
  double max_value() const { return hi_; }
  /// E[f(nu)]; Simpson's rule with 4000 panels for the uniform law.
  double expect(const std::function<double(double)>& f) const;
  /// The law of c * nu.
  PrecisionDistribution scaled(double c) const;
  std::string name() const;

 private:
  enum class Kind { TwoPoint, Uniform };
  PrecisionDistribution(Kind kind, double lo, double hi, double p_lo);

  Kind kind_;
  double lo_;
  double hi_;
  double p_lo_;
};

/// (1/pi) sqrt(E[nu^2] / E[nu]): expected apogees per unit time of the
/// limiting Gaussian process for Gaussian components.
double apogee_rate_reference(const PrecisionDistribution& mu);

/// Limiting covariance E[nu cos(2 sqrt(nu) t)] for Gaussian components.
double covariance_reference(const PrecisionDistribution& mu, double t);

/// Scaled dot product D(t) = d^{-1/2} sum_i nu_i x_i(t) p_i(t) on a grid.
struct DotProductTrace {
  std::vector<double> t;
  std::vector<double> D;
  int apogees = 0;
  int perigees = 0;
};

/// Number of + to - sign changes between consecutive values.
int count_apogees(const std::vector<double>& values);
/// Number of - to + sign changes.
int count_perigees(const std::vector<double>& values);

/// Exact harmonic dynamics of U = sum nu_i x_i^2 / 2 with identity mass,
/// sampled at t_k = k dt for k = 0..steps.
DotProductTrace exact_gaussian_trace(const std::vector<double>& nu, const Eigen::VectorXd& x0,
                                     const Eigen::VectorXd& p0, double dt, std::size_t steps);

/// Leapfrog dynamics on any target with identity mass, recording
/// D = d^{-1/2} p' grad U(x) after every step. For Gaussian components this
/// is the same D as above.
DotProductTrace leapfrog_trace(const TargetDensity& target, const Eigen::VectorXd& x0,
                               const Eigen::VectorXd& p0, double eps, std::size_t steps);

struct RateEstimate {
  double rate = 0.0;
  double se = 0.0;
  double reference = 0.0;
  std::vector<int> counts;
  double window = 0.0;
  std::size_t dimension = 0;
  /// Fewer than 5 apogees per replicate on average: widen the window.
  bool window_warning = false;
};

/// Mean apogees per unit time over `replicates` exact traces of length T
/// started from (X0, P0) ~ pi~. Grid spacing dt = 0.01 / sqrt(max nu).
RateEstimate apogee_rate_estimate(const PrecisionDistribution& mu, std::size_t dimension,
                                  double window, std::size_t replicates, std::uint64_t seed);

struct CovarianceEstimate {
  std::vector<double> lags;
  std::vector<double> value;
  std::vector<double> se;
};

/// Monte Carlo estimate of V(t) = Cov(D(s), D(s + t)) at each lag from
/// `samples` independent components. `start_offset` is s.
CovarianceEstimate covariance_estimate(const PrecisionDistribution& mu,
                                       const std::vector<double>& lags, std::size_t samples,
                                       std::uint64_t seed, double start_offset = 0.0);

/// replicate,d,T,apogee_count,rate
void write_apogee_csv(const RateEstimate& estimate, std::ostream& out);
/// lag,V_hat,se
void write_covariance_csv(const CovarianceEstimate& estimate, std::ostream& out);

}  // namespace aaps
