#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "aaps/rng.hpp"

namespace aaps {

/// Target density pi(x) exposed through its potential U(x) = -log pi(x).
///
/// Potentials are defined up to an additive constant. Implementations are
/// immutable after construction, so one instance may be shared read-only by
/// any number of concurrently running chains.
class TargetDensity {
 public:
  virtual ~TargetDensity() = default;

  virtual std::size_t dimension() const = 0;

  /// Returns U(x) and writes grad U(x) into `grad` (resized if needed).
  virtual double potential_and_gradient(const Eigen::VectorXd& x,
                                        Eigen::VectorXd& grad) const = 0;

  virtual double potential(const Eigen::VectorXd& x) const;

  virtual std::string name() const = 0;

  /// Column names for sample output. Defaults to x_1..x_d.
  virtual std::vector<std::string> parameter_names() const;

  /// A starting point for a chain. Targets that can be sampled exactly
  /// return an exact draw; others return a sensible fixed point.
  virtual Eigen::VectorXd initial_point(Rng& rng) const;
};

using TargetPtr = std::shared_ptr<const TargetDensity>;

enum class ComponentFamily { Gaussian, Logistic, SkewGaussian };
enum class ProgressionKind { SD, VAR, H, InvSD };

std::string to_string(ComponentFamily family);
std::string to_string(ProgressionKind kind);
ComponentFamily parse_component_family(const std::string& text);
ProgressionKind parse_progression_kind(const std::string& text);

/// Jittered sequence of length scales sigma_1..sigma_d running from the
/// smallest to the largest with max ratio `xi`.
///
/// Positions w_1 = 0 and w_d = 1; interior positions are
/// w_i = (i - 1 + U_i)/(d - 1) with U_i ~ Unif(-0.5, 0.5) drawn from
/// `jitter_seed`. The kind selects which of sigma, sigma^2, 1/sigma^2 or
/// 1/sigma is linear in w.
struct ScaleProgression {
  ProgressionKind kind = ProgressionKind::VAR;
  double xi = 20.0;
  std::size_t dimension = 40;
  std::uint64_t jitter_seed = 1;

  /// Throws std::invalid_argument when xi <= 1 or dimension < 2.
  void validate() const;
  std::vector<double> positions() const;
  std::vector<double> scales() const;
};

/// Product of independent one-dimensional components with scales sigma_i.
class ProductTarget final : public TargetDensity {
 public:
  ProductTarget(ComponentFamily family, std::vector<double> scales,
                double skew_alpha = 3.0, std::string label = {});

  std::size_t dimension() const override { return scales_.size(); }
  double potential_and_gradient(const Eigen::VectorXd& x,
                                Eigen::VectorXd& grad) const override;
  double potential(const Eigen::VectorXd& x) const override;
  std::string name() const override;
  Eigen::VectorXd initial_point(Rng& rng) const override;

  ComponentFamily family() const { return family_; }
  const std::vector<double>& scales() const { return scales_; }
  double skew_alpha() const { return skew_alpha_; }

  /// Potential of the standardised component at z = x_i / sigma_i, without
  /// the log sigma_i term.
  double component_potential(double z) const;
  /// Derivative of component_potential with respect to z.
  double component_derivative(double z) const;

 private:
  ComponentFamily family_;
  std::vector<double> scales_;
  Eigen::VectorXd inv_scales_;
  double skew_alpha_;
  std::string label_;
};

/// pi_G, pi_L or pi_SG with the given progression of scales.
TargetPtr make_product_target(ComponentFamily family,
                              const ScaleProgression& progression,
                              double skew_alpha = 3.0);

/// Product Gaussian with standard deviations linearly spaced on [1, xi] and
/// no jitter. Stand-in for the benchmark target from Neal's online
/// comparison of HMC and NUTS.
TargetPtr make_radford_neal_gaussian(std::size_t dimension, double xi);

/// Squared scale s_i^2 = 99(i-1)/(d/2-1) + 1 of the i-th (1-based) pair of a
/// d-dimensional modified Rosenbrock target; s_1^2 = 1 when d = 2.
double rosenbrock_scale_squared(std::size_t pair_index, std::size_t dimension);

/// Banana-shaped target with quadratic tails. Pairs (x_{2i-1}, x_{2i}) are
/// independent; within a pair,
///   U_i = (a - sqrt2 beta s)^2 / (2 s^2)
///       + (b - a^2 / (sqrt2 s (1 + a^2/(4 s^2))))^2 / 2
/// with a = x_{2i-1}, b = x_{2i}.
class ModifiedRosenbrock final : public TargetDensity {
 public:
  ModifiedRosenbrock(std::size_t dimension, double beta = 1.0);
  ModifiedRosenbrock(std::vector<double> pair_scales_squared, double beta);

  std::size_t dimension() const override { return 2 * s_.size(); }
  double potential_and_gradient(const Eigen::VectorXd& x,
                                Eigen::VectorXd& grad) const override;
  std::string name() const override;
  Eigen::VectorXd initial_point(Rng& rng) const override;

  const std::vector<double>& pair_scales() const { return s_; }

 private:
  std::vector<double> s_;
  double beta_;
};

TargetPtr make_modified_rosenbrock(std::size_t dimension, double beta = 1.0);

/// Equal-weight mixture 0.5 N((-a,0,...,0), I_d) + 0.5 N((a,0,...,0), v I_d)
/// with v = 100 by default.
class BimodalMixture final : public TargetDensity {
 public:
  BimodalMixture(std::size_t dimension, double separation,
                 double second_variance = 100.0);

  std::size_t dimension() const override { return d_; }
  double potential_and_gradient(const Eigen::VectorXd& x,
                                Eigen::VectorXd& grad) const override;
  std::string name() const override;
  Eigen::VectorXd initial_point(Rng& rng) const override;

  double separation() const { return a_; }

 private:
  std::size_t d_;
  double a_;
  double v2_;
};

TargetPtr make_bimodal(std::size_t dimension, double separation);

/// Standard normal cdf and its logarithm, accurate far into the lower tail.
double normal_cdf(double t);
double log_normal_cdf(double t);
/// phi(t) / Phi(t), stable for very negative t.
double inverse_mills_ratio(double t);

}  // namespace aaps
