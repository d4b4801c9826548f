#include "aaps/bench/runner.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <stdexcept>
#include <thread>

#include "aaps/chain.hpp"

namespace aaps::bench {

std::uint64_t replicate_seed(std::uint64_t master, int replicate) {
  return derive_seed(master, static_cast<std::uint64_t>(replicate));
}

namespace {

void fill_sv_columns(SweepRecord& rec) {
  if (rec.ess.size() < 4) return;
  rec.has_sv = true;
  rec.ess_alpha = rec.ess[0];
  rec.ess_beta = rec.ess[1];
  rec.ess_gamma = rec.ess[2];
  rec.min_ess_latent = *std::min_element(rec.ess.begin() + 3, rec.ess.end());
}

}  // namespace

SingleRun run_single(const ExperimentConfig& config, const GridPoint& point, int replicate,
                     const TargetPtr& target, bool keep_samples) {
  SingleRun out;
  SweepRecord& rec = out.record;
  rec.grid_index = point.index;
  rec.sampler = to_string(point.kind);
  rec.scheme = point.kind == SamplerKind::Aaps ? std::to_string(static_cast<int>(point.scheme)) : "";
  rec.eps = point.eps;
  rec.K = point.K;
  rec.L = point.L;
  rec.replicate = replicate;
  rec.seed = replicate_seed(config.run.seed, replicate);
  rec.iterations = config.run.iterations;
  rec.names = target->parameter_names();

  const auto start = std::chrono::steady_clock::now();
  try {
    auto kernel = build_kernel(config.sampler, point, target);
    Rng rng(rec.seed);
    Eigen::VectorXd x0 = target->initial_point(rng);
    Eigen::VectorXd grad;
    if (!std::isfinite(target->potential_and_gradient(x0, grad))) {
      throw std::runtime_error("target is not finite at the initial point");
    }
    ChainOptions options;
    options.iterations = config.run.iterations;
    options.burn_in = config.burn_in();
    options.thin = config.run.thin;
    options.keep_samples = true;
    options.compute_ess = config.run.iterations >= 4;
    options.histogram_bins =
        point.kind == SamplerKind::Aaps ? static_cast<std::size_t>(point.K) + 1 : 0;
    ChainOutput chain = run_chain(*kernel, std::move(x0), options, rng);

    rec.leapfrog_steps = chain.stats.leapfrog_steps;
    rec.acceptance_rate = chain.stats.acceptance_rate;
    rec.ess = chain.stats.ess;
    rec.segment_histogram = chain.stats.segment_histogram;
    if (chain.samples.rows() > 0) {
      const Eigen::VectorXd m = chain.samples.colwise().mean().transpose();
      rec.means.assign(m.data(), m.data() + m.size());
    }
    if (!rec.ess.empty()) {
      rec.min_ess = chain.stats.min_ess();
      rec.min_ess_param = rec.names[chain.stats.min_ess_component()];
      rec.efficiency = efficiency(chain.stats);
    }
    if (config.target.is_sv()) fill_sv_columns(rec);
    if (keep_samples) out.samples = std::move(chain.samples);
  } catch (const std::exception& e) {
    rec.status = std::string("error: ") + e.what();
  }
  rec.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

std::vector<SweepRecord> run_sweep(const ExperimentConfig& config, const TargetPtr& target,
                                   int threads) {
  const std::vector<GridPoint> grid = expand_grid(config.sampler);
  const std::size_t reps = static_cast<std::size_t>(config.run.replicates);
  const std::size_t jobs = grid.size() * reps;
  std::vector<SweepRecord> records(jobs);
  std::atomic<std::size_t> next{0};

  auto worker = [&]() {
    while (true) {
      const std::size_t job = next.fetch_add(1);
      if (job >= jobs) return;
      const GridPoint& point = grid[job / reps];
      const int replicate = static_cast<int>(job % reps);
      records[job] = run_single(config, point, replicate, target, false).record;
    }
  };

  const int n = std::max(1, std::min<int>(threads, static_cast<int>(jobs)));
  if (n == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < n; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  return records;
}

}  // namespace aaps::bench
