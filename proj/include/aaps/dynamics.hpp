#pragma once

#include <cmath>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <vector>

#include <Eigen/Dense>

#include "aaps/targets.hpp"

namespace aaps {

/// Diagonal mass matrix M. Momentum is distributed N(0, M) and the kinetic
/// energy is p' M^{-1} p / 2.
class MassMatrix {
 public:
  static MassMatrix identity(std::size_t dimension);
  /// Throws std::invalid_argument unless every entry is positive and finite.
  explicit MassMatrix(Eigen::VectorXd diagonal);

  std::size_t dimension() const { return static_cast<std::size_t>(diag_.size()); }
  const Eigen::VectorXd& diagonal() const { return diag_; }
  const Eigen::VectorXd& inverse() const { return inv_; }
  const Eigen::VectorXd& sqrt_diagonal() const { return sqrt_; }

  double kinetic_energy(const Eigen::VectorXd& p) const;
  /// p' M^{-1} v
  double inner(const Eigen::VectorXd& p, const Eigen::VectorXd& v) const;
  /// Fresh momentum p ~ N(0, M).
  Eigen::VectorXd sample_momentum(Rng& rng) const;

 private:
  Eigen::VectorXd diag_;
  Eigen::VectorXd inv_;
  Eigen::VectorXd sqrt_;
};

/// Position-momentum pair with cached gradient and energies.
///
/// `du_dt` caches p' M^{-1} grad U(x), the rate of change of the potential
/// along the flow; its sign drives apogee detection.
struct PhaseState {
  Eigen::VectorXd x;
  Eigen::VectorXd p;
  Eigen::VectorXd grad;
  double potential = 0.0;
  double kinetic = 0.0;
  double du_dt = 0.0;

  double hamiltonian() const { return potential + kinetic; }
  /// log pi~(z) = -H(z)
  double log_density() const { return -hamiltonian(); }
  bool finite() const;
};

/// Builds a state, evaluating U and grad U once. Not counted as a leapfrog step.
PhaseState make_phase_state(const Eigen::VectorXd& x, const Eigen::VectorXd& p,
                            const MassMatrix& mass, const TargetDensity& target);

/// Negates the momentum (and the cached du_dt) in place.
void flip_momentum(PhaseState& z);

/// Leapfrog work counter. The only place that increments it is
/// leapfrog_step(); it is the denominator of every efficiency figure.
struct WorkCounter {
  std::uint64_t leapfrog_steps = 0;
};

/// One leapfrog step of size eps:
///   p' = p - eps/2 grad U(x0); x1 = x0 + eps M^{-1} p'; p1 = p' - eps/2 grad U(x1).
/// Exactly one gradient evaluation. `from` and `to` may alias. A negative
/// eps integrates backward in time. A non-finite result leaves
/// `to.finite()` false; callers treat that as divergence.
void leapfrog_step(const PhaseState& from, PhaseState& to, double eps, const MassMatrix& mass,
                   const TargetDensity& target, WorkCounter& work);

PhaseState leapfrog_step(const PhaseState& from, double eps, const MassMatrix& mass,
                         const TargetDensity& target, WorkCounter& work);

/// True iff the potential passes a local maximum between the two states:
/// p_l' M^{-1} grad U(x_l) > 0 and p_{l+1}' M^{-1} grad U(x_{l+1}) < 0.
/// An exact zero counts as "not uphill" on both sides.
bool is_apogee_crossing(const PhaseState& current, const PhaseState& next,
                        const MassMatrix& mass);
/// Same test on the cached du_dt values.
inline bool is_apogee_crossing(const PhaseState& current, const PhaseState& next) {
  return current.du_dt > 0.0 && next.du_dt < 0.0;
}

struct PathOptions {
  /// Stability threshold: the path is abandoned once max H - min H >= delta.
  double delta = 1000.0;
  /// Hard cap on leapfrog steps per direction; reaching it marks the path
  /// unstable. Guards against targets whose paths never reach an apogee.
  std::uint64_t max_steps_per_direction = std::uint64_t{1} << 22;
};

enum class Direction { Forward, Backward };

/// One visited point. `step` is the signed time index relative to z0 and
/// `segment` the signed segment index (0 is the segment holding z0).
struct PathPoint {
  const PhaseState& state;
  long step;
  int segment;
  Direction direction;
};

/// Outcome of traversing S_{a:b}(z0).
struct PathSummary {
  bool stable = true;
  bool diverged = false;
  bool hit_step_limit = false;
  std::size_t forward_points = 0;   // z_0..z_F, including z_0
  std::size_t backward_points = 0;  // z_{-1}..z_B
  double min_h = std::numeric_limits<double>::infinity();
  double max_h = -std::numeric_limits<double>::infinity();
  std::uint64_t leapfrog_steps = 0;
  /// Number of PhaseState buffers held at any time during traversal.
  std::size_t retained_states = 0;

  std::size_t points() const { return forward_points + backward_points; }
};

/// Traverses S_{a:b}(z0) without storing it.
///
/// Visits z_0, z_1, ..., z_F (forward in time) and then z_{-1}, ..., z_B
/// (backward in time), passing each point once to `visit`. Forward
/// integration stops at the (b+1)-th apogee crossing, backward at the
/// (1-a)-th; the point beyond the last crossing is not part of the path.
/// Backward integration is forward leapfrog on (x, -p) with momenta
/// re-reflected before the visitor sees them. The spread max H - min H is
/// monitored as points arrive and the traversal stops as soon as it reaches
/// options.delta, or on divergence; in both cases `stable` is false.
template <typename Visitor>
PathSummary stream_segment_range(const PhaseState& z0, int a, int b, double eps,
                                 const MassMatrix& mass, const TargetDensity& target,
                                 const PathOptions& options, WorkCounter& work, Visitor&& visit);

/// Stored path S_{a:b}(z0) in time order z_B..z_F.
struct SegmentPath {
  struct Entry {
    PhaseState state;
    long step;
    int segment;
  };

  std::vector<Entry> points;
  std::size_t origin = 0;  // index of z0 within `points`
  int a = 0;
  int b = 0;
  PathSummary summary;

  bool stable() const { return summary.stable; }
  std::size_t size() const { return points.size(); }
  /// Number of apogee crossings between consecutive stored points.
  int crossings() const;
};

SegmentPath build_segment_range(const PhaseState& z0, int a, int b, double eps,
                                const MassMatrix& mass, const TargetDensity& target,
                                const PathOptions& options, WorkCounter& work);

/// Writes a path as CSV: step,segment,x_1..x_d,p_1..p_d,H.
void write_path_csv(const SegmentPath& path, std::ostream& out);

// ---------------------------------------------------------------------------

namespace detail {

class HamiltonianRange {
 public:
  explicit HamiltonianRange(double delta) : delta_(delta) {}
  /// Returns false once the spread reaches delta.
  bool add(double h) {
    if (h < min_) min_ = h;
    if (h > max_) max_ = h;
    return max_ - min_ < delta_;
  }
  double min() const { return min_; }
  double max() const { return max_; }

 private:
  double delta_;
  double min_ = std::numeric_limits<double>::infinity();
  double max_ = -std::numeric_limits<double>::infinity();
};

}  // namespace detail

template <typename Visitor>
PathSummary stream_segment_range(const PhaseState& z0, int a, int b, double eps,
                                 const MassMatrix& mass, const TargetDensity& target,
                                 const PathOptions& options, WorkCounter& work, Visitor&& visit) {
  PathSummary summary;
  const std::uint64_t work_at_start = work.leapfrog_steps;
  detail::HamiltonianRange range(options.delta);

  auto finish = [&](bool stable) {
    summary.stable = stable;
    summary.min_h = range.min();
    summary.max_h = range.max();
    summary.leapfrog_steps = work.leapfrog_steps - work_at_start;
    return summary;
  };

  // Two buffers per direction, swapped step to step; the backward pass
  // re-uses them plus one scratch state for the re-reflected view.
  PhaseState current = z0;
  PhaseState next = z0;
  PhaseState reflected = z0;
  summary.retained_states = 3;

  if (!z0.finite()) {
    summary.diverged = true;
    return finish(false);
  }
  visit(PathPoint{z0, 0, 0, Direction::Forward});
  ++summary.forward_points;
  if (!range.add(z0.hamiltonian())) return finish(false);

  // Forward: segments 0..b.
  {
    int segment = 0;
    long step = 0;
    std::uint64_t taken = 0;
    while (true) {
      if (taken++ >= options.max_steps_per_direction) {
        summary.hit_step_limit = true;
        return finish(false);
      }
      leapfrog_step(current, next, eps, mass, target, work);
      if (!next.finite()) {
        summary.diverged = true;
        return finish(false);
      }
      if (is_apogee_crossing(current, next)) {
        if (++segment > b) break;
      }
      ++step;
      visit(PathPoint{next, step, segment, Direction::Forward});
      ++summary.forward_points;
      if (!range.add(next.hamiltonian())) return finish(false);
      std::swap(current, next);
    }
  }

  // Backward: segments -1..a, integrating (x, -p) forward.
  {
    current = z0;
    flip_momentum(current);
    int segment = 0;
    long step = 0;
    std::uint64_t taken = 0;
    while (true) {
      if (taken++ >= options.max_steps_per_direction) {
        summary.hit_step_limit = true;
        return finish(false);
      }
      leapfrog_step(current, next, eps, mass, target, work);
      if (!next.finite()) {
        summary.diverged = true;
        return finish(false);
      }
      if (is_apogee_crossing(current, next)) {
        if (--segment < a) break;
      }
      --step;
      reflected.x = next.x;
      reflected.p = -next.p;
      reflected.grad = next.grad;
      reflected.potential = next.potential;
      reflected.kinetic = next.kinetic;
      reflected.du_dt = -next.du_dt;
      visit(PathPoint{reflected, step, segment, Direction::Backward});
      ++summary.backward_points;
      if (!range.add(next.hamiltonian())) return finish(false);
      std::swap(current, next);
    }
  }

  return finish(true);
}

}  // namespace aaps
