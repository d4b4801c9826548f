#include "aaps/dynamics.hpp"

#include <iomanip>
#include <ostream>
#include <stdexcept>

namespace aaps {

MassMatrix MassMatrix::identity(std::size_t dimension) {
  return MassMatrix(Eigen::VectorXd::Ones(static_cast<Eigen::Index>(dimension)));
}

MassMatrix::MassMatrix(Eigen::VectorXd diagonal) : diag_(std::move(diagonal)) {
  if (diag_.size() == 0) throw std::invalid_argument("mass matrix must be non-empty");
  for (Eigen::Index i = 0; i < diag_.size(); ++i) {
    if (!(diag_[i] > 0.0) || !std::isfinite(diag_[i])) {
      throw std::invalid_argument("mass matrix entries must be positive and finite");
    }
  }
  inv_ = diag_.cwiseInverse();
  sqrt_ = diag_.cwiseSqrt();
}

double MassMatrix::kinetic_energy(const Eigen::VectorXd& p) const {
  return 0.5 * p.cwiseProduct(inv_).dot(p);
}

double MassMatrix::inner(const Eigen::VectorXd& p, const Eigen::VectorXd& v) const {
  return p.cwiseProduct(inv_).dot(v);
}

Eigen::VectorXd MassMatrix::sample_momentum(Rng& rng) const {
  Eigen::VectorXd p(diag_.size());
  for (Eigen::Index i = 0; i < p.size(); ++i) p[i] = sqrt_[i] * rng.normal();
  return p;
}

bool PhaseState::finite() const {
  return std::isfinite(potential) && std::isfinite(kinetic) && std::isfinite(du_dt);
}

PhaseState make_phase_state(const Eigen::VectorXd& x, const Eigen::VectorXd& p,
                            const MassMatrix& mass, const TargetDensity& target) {
  if (static_cast<std::size_t>(x.size()) != target.dimension() ||
      static_cast<std::size_t>(p.size()) != target.dimension() ||
      mass.dimension() != target.dimension()) {
    throw std::invalid_argument("phase state dimension does not match the target");
  }
  PhaseState z;
  z.x = x;
  z.p = p;
  z.potential = target.potential_and_gradient(z.x, z.grad);
  z.kinetic = mass.kinetic_energy(z.p);
  z.du_dt = mass.inner(z.p, z.grad);
  return z;
}

void flip_momentum(PhaseState& z) {
  z.p = -z.p;
  z.du_dt = -z.du_dt;
}

void leapfrog_step(const PhaseState& from, PhaseState& to, double eps, const MassMatrix& mass,
                   const TargetDensity& target, WorkCounter& work) {
  const double half = 0.5 * eps;
  const Eigen::VectorXd& inv = mass.inverse();
  to.p = from.p - half * from.grad;
  to.x = from.x + eps * inv.cwiseProduct(to.p);
  to.potential = target.potential_and_gradient(to.x, to.grad);
  to.p -= half * to.grad;
  to.kinetic = mass.kinetic_energy(to.p);
  to.du_dt = mass.inner(to.p, to.grad);
  ++work.leapfrog_steps;
}

PhaseState leapfrog_step(const PhaseState& from, double eps, const MassMatrix& mass,
                         const TargetDensity& target, WorkCounter& work) {
  PhaseState to;
  leapfrog_step(from, to, eps, mass, target, work);
  return to;
}

bool is_apogee_crossing(const PhaseState& current, const PhaseState& next,
                        const MassMatrix& mass) {
  return mass.inner(current.p, current.grad) > 0.0 && mass.inner(next.p, next.grad) < 0.0;
}

int SegmentPath::crossings() const {
  int count = 0;
  for (std::size_t i = 1; i < points.size(); ++i) {
    if (is_apogee_crossing(points[i - 1].state, points[i].state)) ++count;
  }
  return count;
}

SegmentPath build_segment_range(const PhaseState& z0, int a, int b, double eps,
                                const MassMatrix& mass, const TargetDensity& target,
                                const PathOptions& options, WorkCounter& work) {
  if (a > 0 || b < 0) throw std::invalid_argument("segment range requires a <= 0 <= b");
  SegmentPath path;
  path.a = a;
  path.b = b;
  std::vector<SegmentPath::Entry> forward;
  std::vector<SegmentPath::Entry> backward;
  path.summary = stream_segment_range(
      z0, a, b, eps, mass, target, options, work, [&](const PathPoint& point) {
        auto& dest = point.direction == Direction::Forward ? forward : backward;
        dest.push_back({point.state, point.step, point.segment});
      });
  path.points.reserve(forward.size() + backward.size());
  for (auto it = backward.rbegin(); it != backward.rend(); ++it) {
    path.points.push_back(std::move(*it));
  }
  path.origin = path.points.size();
  for (auto& entry : forward) path.points.push_back(std::move(entry));
  return path;
}

void write_path_csv(const SegmentPath& path, std::ostream& out) {
  if (path.points.empty()) {
    out << "step,segment,H\n";
    return;
  }
  const Eigen::Index d = path.points.front().state.x.size();
  out << "step,segment";
  for (Eigen::Index i = 1; i <= d; ++i) out << ",x_" << i;
  for (Eigen::Index i = 1; i <= d; ++i) out << ",p_" << i;
  out << ",H\n" << std::setprecision(17);
  for (const auto& entry : path.points) {
    out << entry.step << ',' << entry.segment;
    for (Eigen::Index i = 0; i < d; ++i) out << ',' << entry.state.x[i];
    for (Eigen::Index i = 0; i < d; ++i) out << ',' << entry.state.p[i];
    out << ',' << entry.state.hamiltonian() << '\n';
  }
}

}  // namespace aaps
