#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "aaps/targets.hpp"

namespace aaps {

/// Generating parameters of a simulated stochastic-volatility series.
struct SvTruth {
  double phi = 0.98;
  double kappa = 0.65;
  double sigma = 0.15;
  std::vector<double> latent;
};

/// Observed series y_1..y_T, optionally with the parameters that produced it.
struct SVModelData {
  std::vector<double> y;
  std::optional<SvTruth> truth;

  std::size_t length() const { return y.size(); }
};

/// X_1 ~ N(0, sigma^2/(1-phi^2)), X_t | x_{t-1} ~ N(phi x_{t-1}, sigma^2),
/// Y_t ~ N(0, kappa^2 exp(x_t)).
SVModelData simulate_sv_data(std::size_t length, double phi, double kappa, double sigma,
                             std::uint64_t seed);

/// CSV with header "t,y" and one row per observation (t starts at 1).
void write_sv_csv(const SVModelData& data, const std::string& path);
SVModelData read_sv_csv(const std::string& path);

/// Posterior of the stochastic-volatility model in the unconstrained
/// parameterisation theta = (alpha, beta, gamma, x_1..x_T) with
///   phi = (e^alpha - 1)/(e^alpha + 1),  kappa = e^beta,  sigma^2 = e^gamma.
///
/// Priors: pi(kappa) ∝ 1/kappa, 1/sigma^2 ~ Gamma(shape 10, rate 0.05),
/// (1 + phi)/2 ~ Beta(20, 1.5). With u = (1 + phi)/2 = logistic(alpha) and
/// tau = 1/sigma^2 = e^{-gamma}, the log posterior (up to a constant) is
///
///   sum_t [ -beta - x_t/2 - y_t^2 e^{-2 beta - x_t} / 2 ]
///   - T gamma / 2 + log(1 - phi^2)/2 - x_1^2 (1 - phi^2) tau / 2
///   - tau/2 sum_{t>=2} (x_t - phi x_{t-1})^2
///   - 10 gamma - 0.05 tau
///   + 20 log u + 1.5 log(1 - u).
///
/// The kappa prior and the Jacobian of kappa = e^beta cancel, leaving a flat
/// (improper) contribution in beta. No truncation is applied.
class SvPosterior final : public TargetDensity {
 public:
  explicit SvPosterior(SVModelData data);

  std::size_t dimension() const override { return y2_.size() + 3; }
  double potential_and_gradient(const Eigen::VectorXd& theta,
                                Eigen::VectorXd& grad) const override;
  std::string name() const override;
  std::vector<std::string> parameter_names() const override;
  /// The generating parameters when known, else (alpha, beta, gamma) at the
  /// prior-ish values (3, log sd(y), 2 log 0.2) with x = 0.
  Eigen::VectorXd initial_point(Rng& rng) const override;

  const SVModelData& data() const { return data_; }

  /// (alpha, beta, gamma) from (phi, kappa, sigma).
  static Eigen::Vector3d to_unconstrained(double phi, double kappa, double sigma);

 private:
  SVModelData data_;
  Eigen::VectorXd y2_;
};

TargetPtr make_sv_posterior(SVModelData data);

}  // namespace aaps
