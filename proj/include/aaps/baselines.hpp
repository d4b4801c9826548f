#pragma once

#include <string>

#include <Eigen/Dense>

#include "aaps/dynamics.hpp"
#include "aaps/kernel.hpp"
#include "aaps/rng.hpp"
#include "aaps/targets.hpp"

namespace aaps {

struct HmcConfig {
  double eps = 0.1;
  int L = 10;
  /// When set, each iteration uses eps * U with U ~ Unif[blur_lo, blur_hi].
  bool blur = false;
  double blur_lo = 0.8;
  double blur_hi = 1.2;
  Eigen::VectorXd mass_diagonal;

  void validate(std::size_t dimension) const;
};

/// One HMC transition. Draws, in order: momentum, one uniform for the step
/// size (drawn even without blurring, so a collapsed blur interval matches
/// plain HMC draw for draw), then one uniform for acceptance. A trajectory
/// that goes non-finite is rejected after the steps taken so far.
IterationResult hmc_iteration(const Eigen::VectorXd& x_curr, const HmcConfig& config,
                              const MassMatrix& mass, const TargetDensity& target, Rng& rng);

struct NutsConfig {
  double eps = 0.1;
  int max_depth = 10;
  double delta_max = 1000.0;
  Eigen::VectorXd mass_diagonal;

  void validate(std::size_t dimension) const;
};

/// One transition of the slice-based no-U-turn sampler with a fixed step
/// size (efficient tree-building variant of Hoffman and Gelman).
///
/// `accepted` reports whether the chain moved; `accept_prob` is the mean of
/// min(1, pi~(z')/pi~(z0)) over all leapfrog points in the final tree.
/// Every leapfrog step is counted, including those in discarded subtrees.
IterationResult nuts_iteration(const Eigen::VectorXd& x_curr, const NutsConfig& config,
                               const MassMatrix& mass, const TargetDensity& target, Rng& rng);

class HmcKernel final : public Kernel {
 public:
  HmcKernel(TargetPtr target, HmcConfig config);
  IterationStats step(Eigen::VectorXd& x, Rng& rng) override;
  std::string name() const override { return config_.blur ? "blurred_hmc" : "hmc"; }
  const HmcConfig& config() const { return config_; }

 private:
  TargetPtr target_;
  HmcConfig config_;
  MassMatrix mass_;
};

class NutsKernel final : public Kernel {
 public:
  NutsKernel(TargetPtr target, NutsConfig config);
  IterationStats step(Eigen::VectorXd& x, Rng& rng) override;
  std::string name() const override { return "nuts"; }
  const NutsConfig& config() const { return config_; }

 private:
  TargetPtr target_;
  NutsConfig config_;
  MassMatrix mass_;
};

}  // namespace aaps
