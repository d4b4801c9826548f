#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "aaps/dynamics.hpp"
#include "aaps/kernel.hpp"
#include "aaps/rng.hpp"
#include "aaps/targets.hpp"

namespace aaps {

/// Proposal weightings w(z, z') over the points of the path.
///
///   PiOnly    w = pi~(z')                      (always accepts)
///   SJD       w = |x' - x|^2
///   PiSJD     w = pi~(z') |x' - x|^2
///   AJD       w = |x' - x|
///   PiAJD     w = pi~(z') |x' - x|
///   PiHalves  w = pi~(z') 1(z' in opposite half)  (always accepts)
enum class WeightScheme { PiOnly = 1, SJD = 2, PiSJD = 3, AJD = 4, PiAJD = 5, PiHalves = 6 };

std::string to_string(WeightScheme scheme);
/// Accepts the scheme number ("3") or its name ("PiSJD", case-insensitive).
WeightScheme parse_weight_scheme(const std::string& text);
/// Schemes whose proposal and acceptance ratio can be computed in O(1) memory.
bool supports_streaming(WeightScheme scheme);
bool always_accepts(WeightScheme scheme);

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

/// log(exp(a) + exp(b)) without overflow; -inf is the additive identity.
inline double log_add_exp(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  return a > b ? a + std::log1p(std::exp(b - a)) : b + std::log1p(std::exp(a - b));
}

/// log w(from, to) for a point `to` with position to_x and Hamiltonian to_h.
/// PiHalves returns log pi~(to); the half restriction is applied separately.
double log_weight(WeightScheme scheme, const Eigen::VectorXd& from_x,
                  const Eigen::VectorXd& to_x, double to_h);

/// Single-pass weighted selection with O(1) state.
///
/// The first offered item becomes the candidate unconditionally. Item j
/// thereafter replaces the candidate with probability w_j / sum_{i<=j} w_i,
/// which leaves item k selected with probability w_k / sum_i w_i. Exactly one
/// uniform is drawn for every offer after the first, whatever the weights,
/// so the decision stream stays aligned across implementations.
class ReservoirSelector {
 public:
  template <typename Uniform>
  bool offer(double log_w, Uniform& source) {
    ++count_;
    if (count_ == 1) {
      log_total_ = log_w;
      return true;
    }
    const double u = source.uniform();
    log_total_ = log_add_exp(log_total_, log_w);
    if (log_total_ == kNegInf || log_w == kNegInf) return false;
    return u < std::exp(log_w - log_total_);
  }

  double log_total() const { return log_total_; }
  std::size_t count() const { return count_; }

 private:
  double log_total_ = kNegInf;
  std::size_t count_ = 0;
};

/// Index selected by a ReservoirSelector pass over `log_weights`.
template <typename Uniform>
std::size_t reservoir_select(std::span<const double> log_weights, Uniform& source) {
  ReservoirSelector selector;
  std::size_t chosen = 0;
  for (std::size_t i = 0; i < log_weights.size(); ++i) {
    if (selector.offer(log_weights[i], source)) chosen = i;
  }
  return chosen;
}

enum class MergeChoice { Forward, Backward, Current };

/// Picks the forward candidate with probability F/(F + B) given log totals;
/// Current when both totals are zero.
MergeChoice two_sided_merge(double log_forward_total, double log_backward_total, double u);

/// A point that may be proposed.
struct Candidate {
  Eigen::VectorXd x;
  double h = 0.0;
  long step = 0;
  int segment = 0;
};

/// Per-direction running state for the O(1)-memory proposal of Schemes 1-3.
///
/// Holds the reservoir candidate and the log total of w(z_curr, .) over the
/// points seen, plus the summaries
///   T0 = sum v_i,  T1_k = sum v_i x_ik,  T2_k = sum v_i x_ik^2
/// with v_i = pi~(z_i) (Scheme 2: v_i = 1). Coordinates are taken relative
/// to the current position, and the v_i are stored scaled by exp(-log_scale)
/// where log_scale is the largest log v_i seen so far.
class StreamingAccumulator {
 public:
  StreamingAccumulator(const Eigen::VectorXd& origin, WeightScheme scheme);

  template <typename Uniform>
  void add(const PhaseState& z, long step, int segment, Uniform& decisions) {
    const double lw = log_weight(scheme_, origin_, z.x, z.hamiltonian());
    if (reservoir_.offer(lw, decisions)) {
      candidate_.x = z.x;
      candidate_.h = z.hamiltonian();
      candidate_.step = step;
      candidate_.segment = segment;
    }
    accumulate(z.x, scheme_ == WeightScheme::SJD ? 0.0 : -z.hamiltonian());
  }

  bool empty() const { return reservoir_.count() == 0; }
  const Candidate& candidate() const { return candidate_; }
  /// log sum_i w(z_curr, z_i) over the points seen.
  double log_total() const { return reservoir_.log_total(); }
  std::size_t count() const { return reservoir_.count(); }

  double log_scale() const { return log_scale_; }
  double t0() const { return t0_; }
  const Eigen::VectorXd& t1() const { return t1_; }
  const Eigen::VectorXd& t2() const { return t2_; }
  const Eigen::VectorXd& origin() const { return origin_; }
  WeightScheme scheme() const { return scheme_; }

  /// log sum_i w(z_prop, z_i) for this direction, from the summaries alone:
  /// sum_k T2_k - 2 x_k T1_k + x_k^2 T0 (Schemes 2, 3), or T0 (Scheme 1).
  double log_denominator(const Eigen::VectorXd& x_prop) const;

  /// Number of doubles this accumulator holds; depends on d only.
  std::size_t retained_doubles() const;

 private:
  void accumulate(const Eigen::VectorXd& x, double log_v);

  WeightScheme scheme_;
  Eigen::VectorXd origin_;
  ReservoirSelector reservoir_;
  Candidate candidate_;
  double log_scale_ = kNegInf;
  double t0_ = 0.0;
  Eigen::VectorXd t1_;
  Eigen::VectorXd t2_;
  Eigen::VectorXd scratch_;
};

/// log sum over the whole path of w(z_prop, z), combining the forward and
/// backward summaries. Throws std::invalid_argument for Schemes 4-6.
double log_denominator_from_summaries(std::span<const StreamingAccumulator* const> parts,
                                      const Eigen::VectorXd& x_prop);

/// alpha = min(1, [pi~(prop) w(prop,curr) N] / [pi~(curr) w(curr,prop) D]),
/// evaluated in log space. `log_num` = log sum_z w(curr, z) and
/// `log_den` = log sum_z w(prop, z). Returns exactly 1 when the proposal is
/// the current point and for the always-accepting schemes.
double acceptance_probability(WeightScheme scheme, const Candidate& current,
                              const Candidate& proposal, double log_num, double log_den);

/// Split of a stored path into two halves of equal pi~ mass.
///
/// With T_l the cumulative pi~ mass up to point l, the boundary h satisfies
/// T_{h-1} < T_F/2 <= T_h. Point h is split into a first-half copy of mass
/// T_F/2 - T_{h-1} and a second-half copy of mass T_h - T_F/2. Masses are
/// relative to the largest pi~ on the path.
struct HalfSplit {
  std::vector<double> mass;
  std::size_t boundary = 0;
  double boundary_first = 0.0;
  double boundary_second = 0.0;
  double total = 0.0;
};

HalfSplit split_halves(std::span<const double> log_pi);

/// Proposal distribution over path indices for Scheme 6 given which half
/// the current point was assigned to.
std::vector<double> scheme6_proposal_distribution(const HalfSplit& split, bool current_in_first);

/// Probability that the current point at index `current` is placed in the
/// first half (1 or 0 off the boundary).
double scheme6_first_half_probability(const HalfSplit& split, std::size_t current);

/// Marginal Scheme 6 proposal probabilities from `current`, mixing over the
/// half assignment.
std::vector<double> scheme6_marginal_distribution(std::span<const double> log_pi,
                                                  std::size_t current);

struct AapsConfig {
  int K = 5;
  double eps = 0.5;
  double delta = 1000.0;
  WeightScheme scheme = WeightScheme::PiSJD;
  /// Diagonal of M; identity when empty.
  Eigen::VectorXd mass_diagonal;
  /// Stored paths are always used for Schemes 4-6.
  PathMode mode = PathMode::Streaming;
  std::uint64_t max_steps_per_direction = std::uint64_t{1} << 22;

  /// Throws std::invalid_argument on K < 0, eps <= 0, delta <= 0 or a bad
  /// mass diagonal.
  void validate(std::size_t dimension) const;
};

/// One AAPS transition from x_curr.
///
/// Random draws from `rng`, in order: momentum p0 ~ N(0, M); the offset
/// c ~ Unif{0..K}; a 64-bit seed for the per-point reservoir decisions; then,
/// for a stable path, one uniform for the two-sided merge and one for
/// acceptance. Per-point decisions come from a SplitMix64 stream seeded with
/// that value and are consumed in traversal order, so streaming and stored
/// evaluation see the same transcript. An unstable path is rejected.
IterationResult aaps_iteration(const Eigen::VectorXd& x_curr, const AapsConfig& config,
                               const MassMatrix& mass, const TargetDensity& target, Rng& rng);

class AapsKernel final : public Kernel {
 public:
  AapsKernel(TargetPtr target, AapsConfig config);

  IterationStats step(Eigen::VectorXd& x, Rng& rng) override;
  std::string name() const override { return "aaps"; }
  const AapsConfig& config() const { return config_; }

 private:
  TargetPtr target_;
  AapsConfig config_;
  MassMatrix mass_;
};

}  // namespace aaps
