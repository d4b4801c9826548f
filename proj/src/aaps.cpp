#include "aaps/aaps.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

namespace aaps {

std::string to_string(WeightScheme scheme) {
  switch (scheme) {
    case WeightScheme::PiOnly: return "PiOnly";
    case WeightScheme::SJD: return "SJD";
    case WeightScheme::PiSJD: return "PiSJD";
    case WeightScheme::AJD: return "AJD";
    case WeightScheme::PiAJD: return "PiAJD";
    case WeightScheme::PiHalves: return "PiHalves";
  }
  return "unknown";
}

WeightScheme parse_weight_scheme(const std::string& text) {
  std::string key;
  for (char ch : text) key.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
  if (key == "1" || key == "pionly" || key == "pi") return WeightScheme::PiOnly;
  if (key == "2" || key == "sjd") return WeightScheme::SJD;
  if (key == "3" || key == "pisjd") return WeightScheme::PiSJD;
  if (key == "4" || key == "ajd") return WeightScheme::AJD;
  if (key == "5" || key == "piajd") return WeightScheme::PiAJD;
  if (key == "6" || key == "pihalves" || key == "halves") return WeightScheme::PiHalves;
  throw std::invalid_argument("unknown weight scheme '" + text +
                              "' (expected 1-6 or PiOnly, SJD, PiSJD, AJD, PiAJD, PiHalves)");
}

bool supports_streaming(WeightScheme scheme) {
  return scheme == WeightScheme::PiOnly || scheme == WeightScheme::SJD ||
         scheme == WeightScheme::PiSJD;
}

bool always_accepts(WeightScheme scheme) {
  return scheme == WeightScheme::PiOnly || scheme == WeightScheme::PiHalves;
}

double log_weight(WeightScheme scheme, const Eigen::VectorXd& from_x, const Eigen::VectorXd& to_x,
                  double to_h) {
  switch (scheme) {
    case WeightScheme::PiOnly:
    case WeightScheme::PiHalves:
      return -to_h;
    case WeightScheme::SJD:
      return std::log((to_x - from_x).squaredNorm());
    case WeightScheme::PiSJD:
      return -to_h + std::log((to_x - from_x).squaredNorm());
    case WeightScheme::AJD:
      return 0.5 * std::log((to_x - from_x).squaredNorm());
    case WeightScheme::PiAJD:
      return -to_h + 0.5 * std::log((to_x - from_x).squaredNorm());
  }
  return kNegInf;
}

MergeChoice two_sided_merge(double log_forward_total, double log_backward_total, double u) {
  if (log_forward_total == kNegInf && log_backward_total == kNegInf) return MergeChoice::Current;
  if (log_backward_total == kNegInf) return MergeChoice::Forward;
  if (log_forward_total == kNegInf) return MergeChoice::Backward;
  const double p_forward = 1.0 / (1.0 + std::exp(log_backward_total - log_forward_total));
  return u < p_forward ? MergeChoice::Forward : MergeChoice::Backward;
}

// ---------------------------------------------------------------------------

StreamingAccumulator::StreamingAccumulator(const Eigen::VectorXd& origin, WeightScheme scheme)
    : scheme_(scheme), origin_(origin) {
  if (!supports_streaming(scheme)) {
    throw std::invalid_argument("scheme " + to_string(scheme) + " has no O(1)-memory form");
  }
  t1_ = Eigen::VectorXd::Zero(origin.size());
  t2_ = Eigen::VectorXd::Zero(origin.size());
  scratch_.resize(origin.size());
  candidate_.x.resize(origin.size());
}

void StreamingAccumulator::accumulate(const Eigen::VectorXd& x, double log_v) {
  if (log_v == kNegInf) return;
  if (log_v > log_scale_) {
    const double factor = log_scale_ == kNegInf ? 0.0 : std::exp(log_scale_ - log_v);
    t0_ *= factor;
    t1_ *= factor;
    t2_ *= factor;
    log_scale_ = log_v;
  }
  const double v = std::exp(log_v - log_scale_);
  t0_ += v;
  if (scheme_ == WeightScheme::PiOnly) return;
  scratch_ = x - origin_;
  t1_ += v * scratch_;
  t2_ += v * scratch_.cwiseAbs2();
}

double StreamingAccumulator::log_denominator(const Eigen::VectorXd& x_prop) const {
  if (log_scale_ == kNegInf) return kNegInf;
  if (scheme_ == WeightScheme::PiOnly) return log_scale_ + std::log(t0_);
  const Eigen::VectorXd r = x_prop - origin_;
  const double value = t2_.sum() - 2.0 * r.dot(t1_) + r.squaredNorm() * t0_;
  return log_scale_ + std::log(std::max(value, 0.0));
}

std::size_t StreamingAccumulator::retained_doubles() const {
  return static_cast<std::size_t>(origin_.size() * 5 + candidate_.x.size()) + 4;
}

double log_denominator_from_summaries(std::span<const StreamingAccumulator* const> parts,
                                      const Eigen::VectorXd& x_prop) {
  double total = kNegInf;
  for (const StreamingAccumulator* part : parts) {
    if (!supports_streaming(part->scheme())) {
      throw std::invalid_argument("summaries only support Schemes 1-3");
    }
    total = log_add_exp(total, part->log_denominator(x_prop));
  }
  return total;
}

double acceptance_probability(WeightScheme scheme, const Candidate& current,
                              const Candidate& proposal, double log_num, double log_den) {
  if (always_accepts(scheme)) return 1.0;
  if (proposal.step == current.step) return 1.0;
  const double top = -proposal.h + log_weight(scheme, proposal.x, current.x, current.h) + log_num;
  const double bottom = -current.h + log_weight(scheme, current.x, proposal.x, proposal.h) + log_den;
  const double log_ratio = top - bottom;
  if (std::isnan(log_ratio)) return 0.0;
  return log_ratio >= 0.0 ? 1.0 : std::exp(log_ratio);
}

// ---------------------------------------------------------------------------

HalfSplit split_halves(std::span<const double> log_pi) {
  if (log_pi.empty()) throw std::invalid_argument("cannot split an empty path");
  HalfSplit split;
  const double top = *std::max_element(log_pi.begin(), log_pi.end());
  split.mass.resize(log_pi.size());
  if (!std::isfinite(top)) return split;
  for (std::size_t i = 0; i < log_pi.size(); ++i) split.mass[i] = std::exp(log_pi[i] - top);

  double total = 0.0;
  for (double m : split.mass) total += m;
  split.total = total;
  const double half = 0.5 * total;

  double before = 0.0;
  for (std::size_t i = 0; i < split.mass.size(); ++i) {
    const double upto = before + split.mass[i];
    if (upto >= half || i + 1 == split.mass.size()) {
      split.boundary = i;
      split.boundary_first = half - before;
      split.boundary_second = split.mass[i] - split.boundary_first;
      break;
    }
    before = upto;
  }
  return split;
}

double scheme6_first_half_probability(const HalfSplit& split, std::size_t current) {
  if (current < split.boundary) return 1.0;
  if (current > split.boundary) return 0.0;
  return split.boundary_first / split.mass[current];
}

std::vector<double> scheme6_proposal_distribution(const HalfSplit& split, bool current_in_first) {
  std::vector<double> dist(split.mass.size(), 0.0);
  const std::size_t h = split.boundary;
  double norm = 0.0;
  if (current_in_first) {
    dist[h] = split.boundary_second;
    for (std::size_t i = h + 1; i < dist.size(); ++i) dist[i] = split.mass[i];
  } else {
    for (std::size_t i = 0; i < h; ++i) dist[i] = split.mass[i];
    dist[h] = split.boundary_first;
  }
  for (double v : dist) norm += v;
  if (norm > 0.0) {
    for (double& v : dist) v /= norm;
  }
  return dist;
}

std::vector<double> scheme6_marginal_distribution(std::span<const double> log_pi,
                                                  std::size_t current) {
  const HalfSplit split = split_halves(log_pi);
  const double first = scheme6_first_half_probability(split, current);
  std::vector<double> out(log_pi.size(), 0.0);
  if (first > 0.0) {
    const auto d = scheme6_proposal_distribution(split, true);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += first * d[i];
  }
  if (first < 1.0) {
    const auto d = scheme6_proposal_distribution(split, false);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += (1.0 - first) * d[i];
  }
  return out;
}

// ---------------------------------------------------------------------------

void AapsConfig::validate(std::size_t dimension) const {
  if (K < 0) throw std::invalid_argument("AAPS requires K >= 0");
  if (!(eps > 0.0) || !std::isfinite(eps)) throw std::invalid_argument("AAPS requires eps > 0");
  if (!(delta > 0.0)) throw std::invalid_argument("AAPS requires delta > 0");
  if (mass_diagonal.size() != 0) {
    if (static_cast<std::size_t>(mass_diagonal.size()) != dimension) {
      throw std::invalid_argument("mass matrix diagonal has the wrong length");
    }
    MassMatrix check(mass_diagonal);
  }
}

namespace {

Candidate candidate_of(const SegmentPath::Entry& entry) {
  return Candidate{entry.state.x, entry.state.hamiltonian(), entry.step, entry.segment};
}

double log_sum_exp(const std::vector<double>& values) {
  double top = kNegInf;
  for (double v : values) top = std::max(top, v);
  if (top == kNegInf) return kNegInf;
  double s = 0.0;
  for (double v : values) s += std::exp(v - top);
  return top + std::log(s);
}

// Inverse-cdf draw from a normalised distribution.
std::size_t categorical(const std::vector<double>& probs, double u) {
  double acc = 0.0;
  std::size_t last = 0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (probs[i] <= 0.0) continue;
    last = i;
    acc += probs[i];
    if (u < acc) return i;
  }
  return last;
}

}  // namespace

IterationResult aaps_iteration(const Eigen::VectorXd& x_curr, const AapsConfig& config,
                               const MassMatrix& mass, const TargetDensity& target, Rng& rng) {
  IterationResult result{x_curr, {}};
  IterationStats& stats = result.stats;
  stats.step_size = config.eps;

  const Eigen::VectorXd p0 = mass.sample_momentum(rng);
  const int c = rng.uniform_int(0, config.K);
  const int a = -c;
  const int b = config.K - c;
  SplitMix64 decisions(rng.next_u64());

  const PhaseState z0 = make_phase_state(x_curr, p0, mass, target);
  const Candidate current{x_curr, z0.hamiltonian(), 0, 0};
  const PathOptions options{config.delta, config.max_steps_per_direction};
  const WeightScheme scheme = config.scheme;
  WorkCounter work;

  const bool streaming = config.mode == PathMode::Streaming && supports_streaming(scheme);

  if (streaming) {
    StreamingAccumulator forward(x_curr, scheme);
    StreamingAccumulator backward(x_curr, scheme);
    const PathSummary summary = stream_segment_range(
        z0, a, b, config.eps, mass, target, options, work, [&](const PathPoint& point) {
          auto& acc = point.direction == Direction::Forward ? forward : backward;
          acc.add(point.state, point.step, point.segment, decisions);
        });
    stats.leapfrog_steps = summary.leapfrog_steps;
    stats.path_points = summary.points();
    stats.stable = summary.stable;
    if (!summary.stable) return result;

    const double u_merge = rng.uniform();
    const double u_accept = rng.uniform();
    const double log_f = forward.log_total();
    const double log_b = backward.empty() ? kNegInf : backward.log_total();
    const MergeChoice choice = two_sided_merge(log_f, log_b, u_merge);
    const Candidate& proposal = choice == MergeChoice::Forward    ? forward.candidate()
                                : choice == MergeChoice::Backward ? backward.candidate()
                                                                  : current;
    const StreamingAccumulator* parts[] = {&forward, &backward};
    const double log_num = log_add_exp(log_f, log_b);
    const double log_den = always_accepts(scheme) || proposal.step == 0
                               ? log_num
                               : log_denominator_from_summaries(parts, proposal.x);
    stats.proposal_generated = true;
    stats.proposal_segment = proposal.segment;
    stats.accept_prob = acceptance_probability(scheme, current, proposal, log_num, log_den);
    if (u_accept < stats.accept_prob) {
      stats.accepted = true;
      result.x = proposal.x;
    }
    return result;
  }

  const SegmentPath path = build_segment_range(z0, a, b, config.eps, mass, target, options, work);
  stats.leapfrog_steps = path.summary.leapfrog_steps;
  stats.path_points = path.size();
  stats.stable = path.stable();
  if (!path.stable()) return result;

  const double u_merge = rng.uniform();
  const double u_accept = rng.uniform();
  const std::size_t n = path.size();
  const std::size_t o = path.origin;
  std::size_t chosen = o;

  if (scheme == WeightScheme::PiHalves) {
    std::vector<double> log_pi(n);
    for (std::size_t i = 0; i < n; ++i) log_pi[i] = path.points[i].state.log_density();
    const HalfSplit split = split_halves(log_pi);
    if (!(split.total > 0.0)) return result;
    const bool first = decisions.uniform() < scheme6_first_half_probability(split, o);
    chosen = categorical(scheme6_proposal_distribution(split, first), decisions.uniform());
    const Candidate proposal = candidate_of(path.points[chosen]);
    stats.proposal_generated = true;
    stats.proposal_segment = proposal.segment;
    stats.accept_prob = 1.0;
    stats.accepted = true;
    result.x = proposal.x;
    return result;
  }

  // Same traversal order as the streaming visitor: z_0..z_F, then z_{-1}..z_B.
  std::vector<double> log_w(n);
  for (std::size_t i = 0; i < n; ++i) {
    log_w[i] = log_weight(scheme, x_curr, path.points[i].state.x,
                          path.points[i].state.hamiltonian());
  }
  ReservoirSelector fwd;
  ReservoirSelector bwd;
  std::size_t fwd_pick = o;
  std::size_t bwd_pick = o;
  for (std::size_t i = o; i < n; ++i) {
    if (fwd.offer(log_w[i], decisions)) fwd_pick = i;
  }
  for (std::size_t i = o; i-- > 0;) {
    if (bwd.offer(log_w[i], decisions)) bwd_pick = i;
  }
  const MergeChoice choice = two_sided_merge(fwd.log_total(), bwd.log_total(), u_merge);
  if (choice == MergeChoice::Forward) chosen = fwd_pick;
  if (choice == MergeChoice::Backward) chosen = bwd_pick;
  const Candidate proposal = chosen == o ? current : candidate_of(path.points[chosen]);

  const double log_num = log_sum_exp(log_w);
  std::vector<double> log_w_prop(n);
  for (std::size_t i = 0; i < n; ++i) {
    log_w_prop[i] = log_weight(scheme, proposal.x, path.points[i].state.x,
                               path.points[i].state.hamiltonian());
  }
  const double log_den = log_sum_exp(log_w_prop);
  stats.proposal_generated = true;
  stats.proposal_segment = proposal.segment;
  stats.accept_prob = acceptance_probability(scheme, current, proposal, log_num, log_den);
  if (u_accept < stats.accept_prob) {
    stats.accepted = true;
    result.x = proposal.x;
  }
  return result;
}

AapsKernel::AapsKernel(TargetPtr target, AapsConfig config)
    : target_(std::move(target)),
      config_(std::move(config)),
      mass_(config_.mass_diagonal.size() == 0
                ? MassMatrix::identity(target_->dimension())
                : MassMatrix(config_.mass_diagonal)) {
  config_.validate(target_->dimension());
}

IterationStats AapsKernel::step(Eigen::VectorXd& x, Rng& rng) {
  IterationResult r = aaps_iteration(x, config_, mass_, *target_, rng);
  if (r.stats.accepted) x = std::move(r.x);
  return r.stats;
}

}  // namespace aaps
