#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "aaps/bench/config.hpp"
#include "aaps/targets.hpp"

namespace aaps::bench {

/// One (grid point, replicate) outcome.
struct SweepRecord {
  std::size_t grid_index = 0;
  std::string sampler;
  std::string scheme;  // empty for non-AAPS samplers
  double eps = 0.0;
  int K = 0;
  int L = 0;
  int replicate = 0;
  std::uint64_t seed = 0;
  std::uint64_t iterations = 0;
  double min_ess = 0.0;
  std::string min_ess_param;
  std::uint64_t leapfrog_steps = 0;
  double acceptance_rate = 0.0;
  double efficiency = 0.0;
  double wall_seconds = 0.0;
  std::string status = "ok";
  std::vector<std::string> names;
  std::vector<double> ess;
  std::vector<std::uint64_t> segment_histogram;
  std::vector<double> means;
  /// SV posterior only: ESS of alpha, beta, gamma and the minimum over x_t.
  bool has_sv = false;
  double ess_alpha = 0.0;
  double ess_beta = 0.0;
  double ess_gamma = 0.0;
  double min_ess_latent = 0.0;
};

struct SingleRun {
  SweepRecord record;
  Eigen::MatrixXd samples;
};

/// Seed of replicate r: derive_seed(master, r). Every grid point uses the
/// same replicate seeds.
std::uint64_t replicate_seed(std::uint64_t master, int replicate);

/// Burn-in then `iterations` transitions at one grid point. The chain
/// starts from target->initial_point() drawn with the chain's own RNG.
/// Failures are reported in record.status rather than thrown.
SingleRun run_single(const ExperimentConfig& config, const GridPoint& point, int replicate,
                     const TargetPtr& target, bool keep_samples);

/// Every grid point times every replicate, on `threads` workers. Records
/// are returned ordered by (grid index, replicate) whatever the scheduling.
std::vector<SweepRecord> run_sweep(const ExperimentConfig& config, const TargetPtr& target,
                                   int threads);

}  // namespace aaps::bench
