#include "aaps/chain.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace aaps {

ChainOutput run_chain(Kernel& kernel, Eigen::VectorXd x0, const ChainOptions& options, Rng& rng) {
  if (options.thin == 0) throw std::invalid_argument("thinning interval must be positive");
  ChainOutput out;
  Eigen::VectorXd x = std::move(x0);
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x[i])) throw std::invalid_argument("chain start must be finite");
  }

  for (std::uint64_t it = 0; it < options.burn_in; ++it) {
    const IterationStats s = kernel.step(x, rng);
    out.burn_in_leapfrog_steps += s.leapfrog_steps;
  }

  const std::uint64_t kept = options.keep_samples ? options.iterations / options.thin : 0;
  out.samples.resize(static_cast<Eigen::Index>(kept), x.size());
  out.stats.segment_histogram.assign(options.histogram_bins, 0);
  std::uint64_t accepted = 0;
  std::uint64_t row = 0;
  for (std::uint64_t it = 0; it < options.iterations; ++it) {
    const IterationStats s = kernel.step(x, rng);
    out.stats.leapfrog_steps += s.leapfrog_steps;
    if (s.accepted) ++accepted;
    if (!s.stable) ++out.unstable;
    if (s.proposal_generated && options.histogram_bins > 0) {
      const std::size_t k = static_cast<std::size_t>(std::abs(s.proposal_segment));
      if (k < options.histogram_bins) ++out.stats.segment_histogram[k];
    }
    if (options.keep_samples && (it + 1) % options.thin == 0 && row < kept) {
      out.samples.row(static_cast<Eigen::Index>(row++)) = x.transpose();
    }
    if (options.observer) options.observer(it, x, s);
  }
  out.stats.iterations = options.iterations;
  out.stats.acceptance_rate =
      options.iterations > 0 ? static_cast<double>(accepted) / static_cast<double>(options.iterations)
                             : 0.0;
  if (options.compute_ess && out.samples.rows() > 0) out.stats.ess = ess_per_component(out.samples);
  out.final_state = std::move(x);
  return out;
}

}  // namespace aaps
