#pragma once

#include <cstdint>
#include <functional>

#include <Eigen/Dense>

#include "aaps/diagnostics.hpp"
#include "aaps/kernel.hpp"
#include "aaps/rng.hpp"

namespace aaps {

struct ChainOptions {
  std::uint64_t iterations = 1000;
  std::uint64_t burn_in = 0;
  std::uint64_t thin = 1;
  bool keep_samples = true;
  /// Bins of the |segment index| histogram (K+1 for AAPS, 0 to skip).
  std::size_t histogram_bins = 0;
  /// Compute per-component ESS of the kept samples.
  bool compute_ess = true;
  /// Called after every post-burn-in iteration.
  std::function<void(std::uint64_t, const Eigen::VectorXd&, const IterationStats&)> observer;
};

struct ChainOutput {
  /// Kept post-burn-in states, one per row.
  Eigen::MatrixXd samples;
  /// ESS, acceptance and the segment histogram refer to post-burn-in
  /// iterations; leapfrog_steps likewise.
  ChainStats stats;
  std::uint64_t unstable = 0;
  std::uint64_t burn_in_leapfrog_steps = 0;
  Eigen::VectorXd final_state;
};

/// Runs burn_in + iterations transitions of `kernel` from x0.
ChainOutput run_chain(Kernel& kernel, Eigen::VectorXd x0, const ChainOptions& options, Rng& rng);

}  // namespace aaps
