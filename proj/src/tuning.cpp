#include "aaps/tuning.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "aaps/chain.hpp"

namespace aaps {

std::vector<double> EpsilonSchedule::geometric_grid(double lo, double hi, int n) {
  if (!(lo > 0.0) || !(hi >= lo) || n < 1) {
    throw std::invalid_argument("geometric grid needs 0 < lo <= hi and n >= 1");
  }
  std::vector<double> grid(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double t = n == 1 ? 0.0 : static_cast<double>(i) / (n - 1);
    grid[static_cast<std::size_t>(i)] = lo * std::pow(hi / lo, t);
  }
  return grid;
}

std::string to_string(TuneStatus status) {
  switch (status) {
    case TuneStatus::Ok: return "ok";
    case TuneStatus::AboveWindow: return "above_window";
    case TuneStatus::GridExhausted: return "grid_exhausted";
    case TuneStatus::ShrinkExhausted: return "shrink_exhausted";
  }
  return "unknown";
}

namespace {

ChainOutput short_run(const TargetPtr& target, const AapsConfig& config, std::uint64_t iterations,
                      Rng& rng, std::size_t bins = 0, const Eigen::VectorXd* start = nullptr) {
  AapsKernel kernel(target, config);
  ChainOptions options;
  options.iterations = iterations;
  options.keep_samples = false;
  options.compute_ess = false;
  options.histogram_bins = bins;
  Eigen::VectorXd x0 = start ? *start : target->initial_point(rng);
  return run_chain(kernel, std::move(x0), options, rng);
}

}  // namespace

EpsilonTuning tune_epsilon(const TargetPtr& target, const Eigen::VectorXd& mass_diagonal,
                           const EpsilonSchedule& schedule) {
  if (schedule.grid.empty()) throw std::invalid_argument("epsilon grid is empty");
  if (!(schedule.shrink > 0.0 && schedule.shrink < 1.0)) {
    throw std::invalid_argument("epsilon shrink factor must lie in (0, 1)");
  }
  EpsilonTuning out;
  Rng rng(schedule.seed);

  std::vector<double> grid = schedule.grid;
  std::sort(grid.begin(), grid.end(), std::greater<>());
  AapsConfig config;
  config.scheme = schedule.scheme;
  config.delta = schedule.delta;
  config.mass_diagonal = mass_diagonal;

  bool found = false;
  for (double eps : grid) {
    config.K = 0;
    config.eps = eps;
    const ChainOutput run = short_run(target, config, schedule.stage1_iterations, rng);
    if (run.unstable == 0) {
      out.stage1_eps = eps;
      found = true;
      break;
    }
  }
  if (!found) {
    out.status = TuneStatus::GridExhausted;
    out.eps = grid.back();
    return out;
  }

  config.K = schedule.stage2_K;
  double eps = out.stage1_eps;
  for (int attempt = 0; attempt <= schedule.max_shrinks; ++attempt) {
    config.eps = eps;
    const ChainOutput run = short_run(target, config, schedule.stage2_iterations, rng);
    const double acc = run.stats.acceptance_rate;
    out.trace.emplace_back(eps, acc);
    out.eps = eps;
    out.acceptance = acc;
    if (acc >= schedule.accept_lo && acc <= schedule.accept_hi) {
      out.status = TuneStatus::Ok;
      return out;
    }
    if (acc > schedule.accept_hi) {
      out.status = TuneStatus::AboveWindow;
      return out;
    }
    eps *= schedule.shrink;
  }
  out.status = TuneStatus::ShrinkExhausted;
  return out;
}

double profile_change(const std::vector<double>& a, const std::vector<double>& b) {
  double diff = 0.0;
  double norm = 0.0;
  for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) {
    diff += std::abs(a[i] - b[i]);
    norm += std::abs(b[i]);
  }
  return norm > 0.0 ? diff / norm : 0.0;
}

KTuning tune_k(const TargetPtr& target, double eps, const KTuningOptions& options) {
  if (options.K_star < 1) throw std::invalid_argument("K tuning requires K* >= 1");
  if (options.initial_block == 0) throw std::invalid_argument("K tuning block must be positive");
  KTuning out;
  Rng rng(options.seed);

  AapsConfig config;
  config.eps = eps;
  config.scheme = options.scheme;
  config.delta = options.delta;
  config.mass_diagonal = options.mass_diagonal;

  int K_star = options.K_star;
  Eigen::VectorXd x = target->initial_point(rng);
  bool have_result = false;

  while (true) {
    out.K_star_history.push_back(K_star);
    config.K = K_star;
    const std::size_t bins = static_cast<std::size_t>(K_star) + 1;
    std::vector<std::uint64_t> first(bins, 0);
    std::vector<std::uint64_t> second(bins, 0);
    std::uint64_t block = options.initial_block;
    bool stable = false;
    bool exhausted = false;

    auto run_block = [&](std::uint64_t n, std::vector<std::uint64_t>& hist) {
      const ChainOutput run = short_run(target, config, n, rng, bins, &x);
      x = run.final_state;
      out.iterations_used += n;
      for (std::size_t k = 0; k < bins; ++k) hist[k] += run.stats.segment_histogram[k];
    };
    auto total = [](const std::vector<std::uint64_t>& h) {
      std::uint64_t s = 0;
      for (auto v : h) s += v;
      return s;
    };

    if (out.iterations_used + 2 * block > options.iteration_budget) {
      exhausted = true;
    } else {
      run_block(block, first);
      run_block(block, second);
      while (true) {
        if (total(first) > 0 && total(second) > 0) {
          const KDiagnostic a = k_diagnostic(std::span<const std::uint64_t>(first), K_star);
          const KDiagnostic b = k_diagnostic(std::span<const std::uint64_t>(second), K_star);
          if (profile_change(a.m_bar, b.m_bar) < options.stability) {
            stable = true;
            break;
          }
        }
        for (std::size_t k = 0; k < bins; ++k) first[k] += second[k];
        std::fill(second.begin(), second.end(), 0);
        block *= 2;
        if (out.iterations_used + block > options.iteration_budget) {
          exhausted = true;
          break;
        }
        run_block(block, second);
      }
    }

    std::vector<std::uint64_t> combined(bins, 0);
    for (std::size_t k = 0; k < bins; ++k) combined[k] = first[k] + second[k];
    if (total(combined) > 0) {
      out.diagnostic = k_diagnostic(std::span<const std::uint64_t>(combined), K_star);
      out.K_hat = out.diagnostic.K_hat;
      out.K_star = K_star;
      out.stable = stable;
      have_result = true;
    }
    if (exhausted) {
      out.budget_exhausted = true;
      break;
    }
    if (static_cast<double>(out.K_hat) >= options.escalate * K_star) {
      K_star *= 2;
      continue;
    }
    break;
  }
  if (!have_result) out.budget_exhausted = true;
  return out;
}

}  // namespace aaps
