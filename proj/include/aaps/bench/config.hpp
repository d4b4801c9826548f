#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "aaps/aaps.hpp"
#include "aaps/gp_limit.hpp"
#include "aaps/kernel.hpp"
#include "aaps/targets.hpp"

namespace aaps::bench {

/// [target] section.
///   family       gaussian | logistic | skew_gaussian | rosenbrock |
///                radford_neal | bimodal | sv
///   dimension    d (ignored for sv)
///   xi, progression (SD | VAR | H | invSD), jitter_seed, skew_alpha
///   beta                      rosenbrock
///   separation, second_variance   bimodal
///   sv_length, sv_data, sv_seed, sv_phi, sv_kappa, sv_sigma
struct TargetSpec {
  std::string family = "gaussian";
  std::size_t dimension = 40;
  double xi = 20.0;
  std::string progression = "VAR";
  std::uint64_t jitter_seed = 1;
  double skew_alpha = 3.0;
  double beta = 1.0;
  double separation = 7.0;
  double second_variance = 100.0;
  std::size_t sv_length = 1000;
  std::string sv_data;
  std::uint64_t sv_seed = 1;
  double sv_phi = 0.98;
  double sv_kappa = 0.65;
  double sv_sigma = 0.15;

  bool is_sv() const { return family == "sv"; }
  std::string label() const;
};

enum class SamplerKind { Aaps, Hmc, BlurredHmc, Nuts };
std::string to_string(SamplerKind kind);
SamplerKind parse_sampler_kind(const std::string& text);

/// [sampler] section. `eps`, `K`, `L` and `scheme` are comma-separated
/// grids. For kind = hmc a negative L means |L| steps of blurred HMC.
struct SamplerSpec {
  SamplerKind kind = SamplerKind::Aaps;
  std::vector<WeightScheme> schemes{WeightScheme::PiSJD};
  std::vector<double> eps{0.5};
  std::vector<int> K{5};
  std::vector<int> L{10};
  double delta = 1000.0;
  double blur_lo = 0.8;
  double blur_hi = 1.2;
  int max_depth = 10;
  PathMode path_mode = PathMode::Streaming;
};

/// [run] section.
struct RunSpec {
  std::string experiment = "sampling";  // sampling | apogee_rate
  std::uint64_t iterations = 10000;
  /// Defaults to 10% of iterations.
  std::optional<std::uint64_t> burn_in;
  int replicates = 1;
  std::uint64_t seed = 1;
  std::uint64_t thin = 1;
  bool write_samples = false;
};

/// [apogee] section, used when run.experiment = apogee_rate.
///   precision  constant:<v> | two_point:<a>:<b>[:<p_a>] | uniform:<lo>:<hi>
struct ApogeeSpec {
  std::string precision = "constant:1";
  std::size_t dimension = 100;
  double window = 500.0;
  int replicates = 20;
  std::vector<double> lags{0.0, 0.25, 0.5, 0.785398163397, 1.0, 1.5};
  std::size_t covariance_samples = 100000;
};

struct ExperimentConfig {
  std::string name = "experiment";
  TargetSpec target;
  SamplerSpec sampler;
  RunSpec run;
  ApogeeSpec apogee;

  std::uint64_t burn_in() const;
  /// Throws std::invalid_argument on empty grids, non-positive values, etc.
  void validate() const;
};

ExperimentConfig parse_config(std::istream& in);
ExperimentConfig load_config(const std::string& path);
void write_config(const ExperimentConfig& config, std::ostream& out);

PrecisionDistribution parse_precision(const std::string& text);

TargetPtr build_target(const TargetSpec& spec);

/// One cell of the tuning grid.
struct GridPoint {
  std::size_t index = 0;
  SamplerKind kind = SamplerKind::Aaps;
  WeightScheme scheme = WeightScheme::PiSJD;
  double eps = 0.0;
  int K = 0;
  /// Signed L as in the config; negative for blurred HMC.
  int L = 0;
};

/// Cartesian product of the grids, in a fixed order.
std::vector<GridPoint> expand_grid(const SamplerSpec& spec);

std::unique_ptr<Kernel> build_kernel(const SamplerSpec& spec, const GridPoint& point,
                                     const TargetPtr& target);

}  // namespace aaps::bench
