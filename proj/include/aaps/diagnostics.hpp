#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace aaps {

/// Effective sample size by the autoregressive spectral method.
///
/// Fits AR(p) models by Yule-Walker for p = 0..min(n-1, floor(10 log10 n)),
/// keeps the order with the smallest AIC, and estimates the spectral density
/// at zero as sigma^2 / (1 - sum phi)^2 with sigma^2 inflated by n/(n-p-1).
/// ESS = n var(x) / spec(0). A constant sequence has ESS 0.
double ess(std::span<const double> samples);

/// Batch-means ESS with floor(sqrt n) batches; a cross-check only.
double ess_batch_means(std::span<const double> samples);

/// ESS of every column of `samples` (rows are iterations).
std::vector<double> ess_per_component(const Eigen::MatrixXd& samples);

/// Summary of one chain.
struct ChainStats {
  std::vector<double> ess;
  std::uint64_t leapfrog_steps = 0;
  std::uint64_t iterations = 0;
  double acceptance_rate = 0.0;
  /// n(k): number of proposals whose segment index had |j| = k.
  std::vector<std::uint64_t> segment_histogram;

  double min_ess() const;
  std::size_t min_ess_component() const;
};

/// Minimum-component ESS per leapfrog step.
double efficiency(const ChainStats& stats);
double efficiency(std::span<const double> ess_values, std::uint64_t leapfrog_steps);

/// P(|J| = k) when the proposal is uniform over K+1 equal segments and the
/// window offset is uniform: 1/(K+1) for k = 0, 2(K+1-k)/(K+1)^2 otherwise.
double segment_probability(int K, int k);

struct KDiagnostic {
  int K_star = 0;
  std::vector<double> n;
  std::vector<double> p;
  std::vector<double> m;
  /// m normalised so that it sums to 100 (K*+1).
  std::vector<double> m_bar;
  /// argmax of m; ties go to the smaller k.
  int K_hat = 0;
  double total = 0.0;
};

/// Builds the diagnostic from n(0..K*). Throws std::invalid_argument when
/// K* < 1, the histogram has the wrong length or is empty.
KDiagnostic k_diagnostic(std::span<const double> histogram, int K_star);
KDiagnostic k_diagnostic(std::span<const std::uint64_t> histogram, int K_star);

/// First line "# K_hat=<k>,K_star=<K>,N=<total>", then "k,n,p,m,m_bar" rows.
void write_kdiag_csv(const KDiagnostic& diag, std::ostream& out);

}  // namespace aaps
