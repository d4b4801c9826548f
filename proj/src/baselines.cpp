#include "aaps/baselines.hpp"

#include <cmath>
#include <stdexcept>

namespace aaps {

namespace {

MassMatrix mass_for(const Eigen::VectorXd& diagonal, std::size_t dimension) {
  return diagonal.size() == 0 ? MassMatrix::identity(dimension) : MassMatrix(diagonal);
}

void check_mass(const Eigen::VectorXd& diagonal, std::size_t dimension) {
  if (diagonal.size() == 0) return;
  if (static_cast<std::size_t>(diagonal.size()) != dimension) {
    throw std::invalid_argument("mass matrix diagonal has the wrong length");
  }
  MassMatrix check(diagonal);
}

}  // namespace

void HmcConfig::validate(std::size_t dimension) const {
  if (!(eps > 0.0) || !std::isfinite(eps)) throw std::invalid_argument("HMC requires eps > 0");
  if (L < 1) throw std::invalid_argument("HMC requires L >= 1");
  if (blur && !(blur_lo > 0.0 && blur_lo <= blur_hi)) {
    throw std::invalid_argument("HMC blur interval must satisfy 0 < lo <= hi");
  }
  check_mass(mass_diagonal, dimension);
}

void NutsConfig::validate(std::size_t dimension) const {
  if (!(eps > 0.0) || !std::isfinite(eps)) throw std::invalid_argument("NUTS requires eps > 0");
  if (max_depth < 1) throw std::invalid_argument("NUTS requires max_depth >= 1");
  if (!(delta_max > 0.0)) throw std::invalid_argument("NUTS requires delta_max > 0");
  check_mass(mass_diagonal, dimension);
}

IterationResult hmc_iteration(const Eigen::VectorXd& x_curr, const HmcConfig& config,
                              const MassMatrix& mass, const TargetDensity& target, Rng& rng) {
  IterationResult result{x_curr, {}};
  IterationStats& stats = result.stats;

  const Eigen::VectorXd p0 = mass.sample_momentum(rng);
  const double u_blur = rng.uniform();
  const double eps =
      config.blur ? config.eps * (config.blur_lo + (config.blur_hi - config.blur_lo) * u_blur)
                  : config.eps;
  stats.step_size = eps;

  PhaseState z = make_phase_state(x_curr, p0, mass, target);
  const double h0 = z.hamiltonian();
  WorkCounter work;
  bool finite = z.finite();
  for (int l = 0; l < config.L && finite; ++l) {
    leapfrog_step(z, z, eps, mass, target, work);
    finite = z.finite();
  }
  stats.leapfrog_steps = work.leapfrog_steps;
  stats.proposal_generated = true;
  stats.stable = finite;

  const double u_accept = rng.uniform();
  if (!finite) return result;
  const double log_ratio = h0 - z.hamiltonian();
  stats.accept_prob = log_ratio >= 0.0 ? 1.0 : std::exp(log_ratio);
  if (u_accept < stats.accept_prob) {
    stats.accepted = true;
    result.x = z.x;
  }
  return result;
}

// ---------------------------------------------------------------------------

namespace {

struct NutsContext {
  const MassMatrix& mass;
  const TargetDensity& target;
  double eps;
  double delta_max;
  double log_slice;
  double h0;
  Rng& rng;
  WorkCounter work;
};

struct Subtree {
  PhaseState minus;
  PhaseState plus;
  Eigen::VectorXd x_prop;
  double n = 0.0;
  bool ok = true;
  double alpha_sum = 0.0;
  int alpha_count = 0;
};

bool no_u_turn(const PhaseState& minus, const PhaseState& plus, const MassMatrix& mass) {
  const Eigen::VectorXd span = plus.x - minus.x;
  return mass.inner(minus.p, span) >= 0.0 && mass.inner(plus.p, span) >= 0.0;
}

// Extends the trajectory from `edge` by 2^depth leapfrog steps in direction v.
Subtree build_tree(NutsContext& ctx, const PhaseState& edge, int v, int depth) {
  if (depth == 0) {
    Subtree t;
    t.minus = leapfrog_step(edge, v * ctx.eps, ctx.mass, ctx.target, ctx.work);
    const double h = t.minus.hamiltonian();
    const bool finite = t.minus.finite();
    t.n = finite && ctx.log_slice <= -h ? 1.0 : 0.0;
    t.ok = finite && ctx.log_slice < ctx.delta_max - h;
    t.alpha_sum = finite ? std::min(1.0, std::exp(ctx.h0 - h)) : 0.0;
    t.alpha_count = 1;
    t.x_prop = t.minus.x;
    t.plus = t.minus;
    return t;
  }
  Subtree t = build_tree(ctx, edge, v, depth - 1);
  if (!t.ok) return t;
  Subtree u = build_tree(ctx, v < 0 ? t.minus : t.plus, v, depth - 1);
  if (v < 0) {
    t.minus = std::move(u.minus);
  } else {
    t.plus = std::move(u.plus);
  }
  const double total = t.n + u.n;
  if (u.n > 0.0 && ctx.rng.uniform() < u.n / total) t.x_prop = std::move(u.x_prop);
  t.alpha_sum += u.alpha_sum;
  t.alpha_count += u.alpha_count;
  t.ok = u.ok && no_u_turn(t.minus, t.plus, ctx.mass);
  t.n = total;
  return t;
}

}  // namespace

IterationResult nuts_iteration(const Eigen::VectorXd& x_curr, const NutsConfig& config,
                               const MassMatrix& mass, const TargetDensity& target, Rng& rng) {
  IterationResult result{x_curr, {}};
  IterationStats& stats = result.stats;
  stats.step_size = config.eps;

  const Eigen::VectorXd p0 = mass.sample_momentum(rng);
  PhaseState z0 = make_phase_state(x_curr, p0, mass, target);
  const double h0 = z0.hamiltonian();
  const double log_slice = -h0 + std::log(rng.uniform());
  NutsContext ctx{mass, target, config.eps, config.delta_max, log_slice, h0, rng, {}};

  PhaseState minus = z0;
  PhaseState plus = z0;
  double n = 1.0;
  bool ok = z0.finite();
  double alpha_sum = 0.0;
  int alpha_count = 0;
  int depth = 0;
  while (ok && depth < config.max_depth) {
    const int v = rng.uniform() < 0.5 ? -1 : 1;
    Subtree t = build_tree(ctx, v < 0 ? minus : plus, v, depth);
    if (v < 0) {
      minus = std::move(t.minus);
    } else {
      plus = std::move(t.plus);
    }
    alpha_sum += t.alpha_sum;
    alpha_count += t.alpha_count;
    if (t.ok && t.n > 0.0 && rng.uniform() < std::min(1.0, t.n / n)) {
      result.x = std::move(t.x_prop);
    }
    n += t.n;
    ok = t.ok && no_u_turn(minus, plus, mass);
    ++depth;
  }

  stats.leapfrog_steps = ctx.work.leapfrog_steps;
  stats.tree_depth = depth;
  stats.proposal_generated = true;
  stats.accept_prob = alpha_count > 0 ? alpha_sum / alpha_count : 0.0;
  stats.accepted = result.x != x_curr;
  return result;
}

// ---------------------------------------------------------------------------

HmcKernel::HmcKernel(TargetPtr target, HmcConfig config)
    : target_(std::move(target)),
      config_(std::move(config)),
      mass_(mass_for(config_.mass_diagonal, target_->dimension())) {
  config_.validate(target_->dimension());
}

IterationStats HmcKernel::step(Eigen::VectorXd& x, Rng& rng) {
  IterationResult r = hmc_iteration(x, config_, mass_, *target_, rng);
  if (r.stats.accepted) x = std::move(r.x);
  return r.stats;
}

NutsKernel::NutsKernel(TargetPtr target, NutsConfig config)
    : target_(std::move(target)),
      config_(std::move(config)),
      mass_(mass_for(config_.mass_diagonal, target_->dimension())) {
  config_.validate(target_->dimension());
}

IterationStats NutsKernel::step(Eigen::VectorXd& x, Rng& rng) {
  IterationResult r = nuts_iteration(x, config_, mass_, *target_, rng);
  if (r.stats.accepted) x = std::move(r.x);
  return r.stats;
}

}  // namespace aaps
