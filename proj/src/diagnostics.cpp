#include "aaps/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numeric>
#include <ostream>
#include <stdexcept>

namespace aaps {

namespace {

double mean_of(std::span<const double> x) {
  return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

// Sample variance with denominator n - 1.
double variance_of(std::span<const double> x, double mean) {
  double s = 0.0;
  for (double v : x) s += (v - mean) * (v - mean);
  return s / static_cast<double>(x.size() - 1);
}

}  // namespace

double ess(std::span<const double> samples) {
  const std::size_t n = samples.size();
  if (n < 2) return 0.0;
  const double mu = mean_of(samples);
  const double var = variance_of(samples, mu);
  if (!(var > 0.0)) return 0.0;

  const std::size_t order_max = std::min<std::size_t>(
      n - 1, static_cast<std::size_t>(std::floor(10.0 * std::log10(static_cast<double>(n)))));

  // Autocovariances with denominator n.
  std::vector<double> centred(n);
  for (std::size_t i = 0; i < n; ++i) centred[i] = samples[i] - mu;
  std::vector<double> r(order_max + 1, 0.0);
  for (std::size_t lag = 0; lag <= order_max; ++lag) {
    double s = 0.0;
    for (std::size_t i = 0; i + lag < n; ++i) s += centred[i] * centred[i + lag];
    r[lag] = s / static_cast<double>(n);
  }

  // Levinson-Durbin recursion over increasing order.
  const double dn = static_cast<double>(n);
  std::vector<double> phi;
  std::vector<double> best_phi;
  double pred = r[0];
  double best_pred = r[0];
  double best_aic = dn * std::log(r[0]);
  std::size_t best_order = 0;
  for (std::size_t k = 1; k <= order_max; ++k) {
    double acc = r[k];
    for (std::size_t j = 1; j < k; ++j) acc -= phi[j - 1] * r[k - j];
    const double reflection = acc / pred;
    std::vector<double> next(k);
    for (std::size_t j = 1; j < k; ++j) next[j - 1] = phi[j - 1] - reflection * phi[k - j - 1];
    next[k - 1] = reflection;
    phi = std::move(next);
    pred *= 1.0 - reflection * reflection;
    if (!(pred > 0.0)) break;
    const double aic = dn * std::log(pred) + 2.0 * static_cast<double>(k);
    if (aic < best_aic) {
      best_aic = aic;
      best_order = k;
      best_phi = phi;
      best_pred = pred;
    }
  }

  const double var_pred = best_pred * dn / (dn - static_cast<double>(best_order + 1));
  const double phi_sum = std::accumulate(best_phi.begin(), best_phi.end(), 0.0);
  const double spec0 = var_pred / ((1.0 - phi_sum) * (1.0 - phi_sum));
  if (!(spec0 > 0.0) || !std::isfinite(spec0)) return 0.0;
  return dn * var / spec0;
}

double ess_batch_means(std::span<const double> samples) {
  const std::size_t n = samples.size();
  if (n < 4) return 0.0;
  const double mu = mean_of(samples);
  const double var = variance_of(samples, mu);
  if (!(var > 0.0)) return 0.0;
  const std::size_t batch = static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(n))));
  const std::size_t batches = n / batch;
  double s = 0.0;
  for (std::size_t b = 0; b < batches; ++b) {
    const double m = mean_of(samples.subspan(b * batch, batch));
    s += (m - mu) * (m - mu);
  }
  const double sigma2 = static_cast<double>(batch) * s / static_cast<double>(batches - 1);
  if (!(sigma2 > 0.0)) return 0.0;
  return static_cast<double>(n) * var / sigma2;
}

std::vector<double> ess_per_component(const Eigen::MatrixXd& samples) {
  std::vector<double> out(static_cast<std::size_t>(samples.cols()));
  std::vector<double> column(static_cast<std::size_t>(samples.rows()));
  for (Eigen::Index c = 0; c < samples.cols(); ++c) {
    for (Eigen::Index r = 0; r < samples.rows(); ++r) column[static_cast<std::size_t>(r)] = samples(r, c);
    out[static_cast<std::size_t>(c)] = ess(column);
  }
  return out;
}

double ChainStats::min_ess() const {
  if (ess.empty()) return 0.0;
  return *std::min_element(ess.begin(), ess.end());
}

std::size_t ChainStats::min_ess_component() const {
  if (ess.empty()) return 0;
  return static_cast<std::size_t>(std::min_element(ess.begin(), ess.end()) - ess.begin());
}

double efficiency(std::span<const double> ess_values, std::uint64_t leapfrog_steps) {
  if (ess_values.empty() || leapfrog_steps == 0) return 0.0;
  return *std::min_element(ess_values.begin(), ess_values.end()) /
         static_cast<double>(leapfrog_steps);
}

double efficiency(const ChainStats& stats) { return efficiency(stats.ess, stats.leapfrog_steps); }

// ---------------------------------------------------------------------------

double segment_probability(int K, int k) {
  if (K < 0 || k < 0 || k > K) return 0.0;
  const double kp1 = static_cast<double>(K + 1);
  if (k == 0) return 1.0 / kp1;
  return 2.0 * static_cast<double>(K + 1 - k) / (kp1 * kp1);
}

KDiagnostic k_diagnostic(std::span<const double> histogram, int K_star) {
  if (K_star < 1) throw std::invalid_argument("K diagnostic requires K* >= 1");
  if (histogram.size() != static_cast<std::size_t>(K_star) + 1) {
    throw std::invalid_argument("K diagnostic histogram must have K*+1 entries");
  }
  KDiagnostic diag;
  diag.K_star = K_star;
  diag.n.assign(histogram.begin(), histogram.end());
  diag.total = std::accumulate(diag.n.begin(), diag.n.end(), 0.0);
  if (!(diag.total > 0.0)) throw std::invalid_argument("K diagnostic histogram is empty");

  const std::size_t size = diag.n.size();
  diag.p.resize(size);
  diag.m.resize(size);
  diag.m_bar.resize(size);
  double m_total = 0.0;
  for (std::size_t k = 0; k < size; ++k) {
    diag.p[k] = segment_probability(K_star, static_cast<int>(k));
    diag.m[k] = diag.n[k] / diag.p[k];
    m_total += diag.m[k];
  }
  for (std::size_t k = 0; k < size; ++k) {
    diag.m_bar[k] = 100.0 * static_cast<double>(K_star + 1) * diag.m[k] / m_total;
  }
  // Strict comparison keeps the first (smallest) k among ties.
  std::size_t best = 0;
  for (std::size_t k = 1; k < size; ++k) {
    if (diag.m[k] > diag.m[best]) best = k;
  }
  diag.K_hat = static_cast<int>(best);
  return diag;
}

KDiagnostic k_diagnostic(std::span<const std::uint64_t> histogram, int K_star) {
  std::vector<double> counts(histogram.begin(), histogram.end());
  return k_diagnostic(std::span<const double>(counts), K_star);
}

void write_kdiag_csv(const KDiagnostic& diag, std::ostream& out) {
  out << "# K_hat=" << diag.K_hat << ",K_star=" << diag.K_star
      << ",N=" << static_cast<std::uint64_t>(diag.total) << '\n';
  out << "k,n,p,m,m_bar\n" << std::setprecision(12);
  for (std::size_t k = 0; k < diag.n.size(); ++k) {
    out << k << ',' << static_cast<std::uint64_t>(diag.n[k]) << ',' << diag.p[k] << ','
        << diag.m[k] << ',' << diag.m_bar[k] << '\n';
  }
}

}  // namespace aaps
