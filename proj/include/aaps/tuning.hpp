#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "aaps/aaps.hpp"
#include "aaps/diagnostics.hpp"
#include "aaps/targets.hpp"

namespace aaps {

struct EpsilonSchedule {
  /// Candidate step sizes for stage 1; searched from largest to smallest.
  std::vector<double> grid;
  std::uint64_t stage1_iterations = 200;
  std::uint64_t stage2_iterations = 2000;
  int stage2_K = 10;
  double shrink = 0.9;
  int max_shrinks = 60;
  double accept_lo = 0.75;
  double accept_hi = 0.87;
  WeightScheme scheme = WeightScheme::PiSJD;
  double delta = 1000.0;
  std::uint64_t seed = 1;

  /// n points geometrically spaced on [lo, hi].
  static std::vector<double> geometric_grid(double lo, double hi, int n);
};

enum class TuneStatus { Ok, AboveWindow, GridExhausted, ShrinkExhausted };
std::string to_string(TuneStatus status);

struct EpsilonTuning {
  double stage1_eps = 0.0;
  double eps = 0.0;
  double acceptance = 0.0;
  TuneStatus status = TuneStatus::Ok;
  /// (eps, acceptance) for every stage-2 run.
  std::vector<std::pair<double, double>> trace;
};

/// Two-stage step-size search.
///
/// Stage 1 runs AAPS with K = 0 at each grid value, largest first, and keeps
/// the first one whose runs never abandon a path. Stage 2 runs K = stage2_K
/// and multiplies eps by `shrink` until the acceptance rate falls in
/// [accept_lo, accept_hi]. If the rate starts (or jumps) above the window the
/// current eps is returned with status AboveWindow.
EpsilonTuning tune_epsilon(const TargetPtr& target, const Eigen::VectorXd& mass_diagonal,
                           const EpsilonSchedule& schedule);

struct KTuningOptions {
  int K_star = 10;
  std::uint64_t iteration_budget = 100000;
  /// Iterations of the first check at each K*; doubled until stable.
  std::uint64_t initial_block = 4000;
  /// Relative L1 change of m_bar between the two halves of a run.
  double stability = 0.05;
  /// K* is doubled when K_hat >= escalate * K*.
  double escalate = 0.9;
  WeightScheme scheme = WeightScheme::PiSJD;
  double delta = 1000.0;
  Eigen::VectorXd mass_diagonal;
  std::uint64_t seed = 1;
};

struct KTuning {
  int K_hat = 0;
  int K_star = 0;
  bool stable = false;
  bool budget_exhausted = false;
  std::uint64_t iterations_used = 0;
  std::vector<int> K_star_history;
  KDiagnostic diagnostic;
};

/// Relative L1 distance sum|a - b| / sum|b| between two m_bar profiles.
double profile_change(const std::vector<double>& a, const std::vector<double>& b);

/// K tuning by the segment-index diagnostic. Throws std::invalid_argument
/// when K* < 1.
KTuning tune_k(const TargetPtr& target, double eps, const KTuningOptions& options);

}  // namespace aaps
