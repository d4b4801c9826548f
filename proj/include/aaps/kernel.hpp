#pragma once

#include <cstdint>
#include <string>

#include <Eigen/Dense>

#include "aaps/rng.hpp"

namespace aaps {

enum class PathMode { Streaming, Stored };

/// Per-iteration record shared by all kernels.
struct IterationStats {
  bool accepted = false;
  /// False when the path was abandoned (Delta spread, divergence, step cap).
  bool stable = true;
  /// Acceptance probability; NUTS reports the mean Metropolis ratio over the tree.
  double accept_prob = 0.0;
  std::uint64_t leapfrog_steps = 0;
  /// AAPS only: whether a proposal was drawn, and its signed segment index.
  bool proposal_generated = false;
  int proposal_segment = 0;
  std::size_t path_points = 0;
  /// Step size actually used (differs from the nominal one under blurring).
  double step_size = 0.0;
  int tree_depth = 0;
};

struct IterationResult {
  Eigen::VectorXd x;
  IterationStats stats;
};

/// A Markov kernel that updates a position in place. One instance per chain.
class Kernel {
 public:
  virtual ~Kernel() = default;
  virtual IterationStats step(Eigen::VectorXd& x, Rng& rng) = 0;
  virtual std::string name() const = 0;
};

}  // namespace aaps
