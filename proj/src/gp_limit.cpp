#include "aaps/gp_limit.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "aaps/dynamics.hpp"

namespace aaps {

PrecisionDistribution::PrecisionDistribution(Kind kind, double lo, double hi, double p_lo)
    : kind_(kind), lo_(lo), hi_(hi), p_lo_(p_lo) {
  if (!(lo > 0.0) || !(hi >= lo) || !std::isfinite(hi)) {
    throw std::invalid_argument("precision values must be positive and finite");
  }
  if (!(p_lo >= 0.0 && p_lo <= 1.0)) throw std::invalid_argument("probability must lie in [0, 1]");
}

PrecisionDistribution PrecisionDistribution::constant(double value) {
  return PrecisionDistribution(Kind::TwoPoint, value, value, 1.0);
}

PrecisionDistribution PrecisionDistribution::two_point(double a, double b, double p_a) {
  if (a > b) return PrecisionDistribution(Kind::TwoPoint, b, a, 1.0 - p_a);
  return PrecisionDistribution(Kind::TwoPoint, a, b, p_a);
}

PrecisionDistribution PrecisionDistribution::uniform(double lo, double hi) {
  return PrecisionDistribution(Kind::Uniform, lo, hi, 0.0);
}

double PrecisionDistribution::sample(Rng& rng) const {
  const double u = rng.uniform();
  if (kind_ == Kind::Uniform) return lo_ + (hi_ - lo_) * u;
  return u < p_lo_ ? lo_ : hi_;
}

double PrecisionDistribution::expect(const std::function<double(double)>& f) const {
  if (kind_ == Kind::TwoPoint) return p_lo_ * f(lo_) + (1.0 - p_lo_) * f(hi_);
  if (lo_ == hi_) return f(lo_);
  constexpr int panels = 4000;
  const double h = (hi_ - lo_) / panels;
  double s = f(lo_) + f(hi_);
  for (int i = 1; i < panels; ++i) s += (i % 2 == 1 ? 4.0 : 2.0) * f(lo_ + i * h);
  return s * h / 3.0 / (hi_ - lo_);
}

double PrecisionDistribution::mean() const {
  if (kind_ == Kind::Uniform) return 0.5 * (lo_ + hi_);
  return p_lo_ * lo_ + (1.0 - p_lo_) * hi_;
}

double PrecisionDistribution::second_moment() const {
  if (kind_ == Kind::Uniform) return (lo_ * lo_ + lo_ * hi_ + hi_ * hi_) / 3.0;
  return p_lo_ * lo_ * lo_ + (1.0 - p_lo_) * hi_ * hi_;
}

PrecisionDistribution PrecisionDistribution::scaled(double c) const {
  return PrecisionDistribution(kind_, c * lo_, c * hi_, p_lo_);
}

std::string PrecisionDistribution::name() const {
  std::ostringstream s;
  if (kind_ == Kind::Uniform) {
    s << "uniform(" << lo_ << "," << hi_ << ")";
  } else if (lo_ == hi_ || p_lo_ == 1.0) {
    s << "constant(" << lo_ << ")";
  } else {
    s << "two_point(" << lo_ << "," << hi_ << ";" << p_lo_ << ")";
  }
  return s.str();
}

double apogee_rate_reference(const PrecisionDistribution& mu) {
  return std::sqrt(mu.second_moment() / mu.mean()) / std::numbers::pi;
}

double covariance_reference(const PrecisionDistribution& mu, double t) {
  return mu.expect([t](double nu) { return nu * std::cos(2.0 * std::sqrt(nu) * t); });
}

// ---------------------------------------------------------------------------

int count_apogees(const std::vector<double>& values) {
  int n = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i - 1] > 0.0 && values[i] < 0.0) ++n;
  }
  return n;
}

int count_perigees(const std::vector<double>& values) {
  int n = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i - 1] < 0.0 && values[i] > 0.0) ++n;
  }
  return n;
}

namespace {

// Steps every component of the exact harmonic flow by dt and calls
// visit(k, D) for k = 0..steps.
template <typename Visit>
void harmonic_flow(const std::vector<double>& nu, const Eigen::VectorXd& x0,
                   const Eigen::VectorXd& p0, double dt, std::size_t steps, Visit&& visit) {
  const std::size_t d = nu.size();
  if (static_cast<std::size_t>(x0.size()) != d || static_cast<std::size_t>(p0.size()) != d) {
    throw std::invalid_argument("trace start does not match the number of components");
  }
  std::vector<double> omega(d), c(d), s(d), x(d), p(d);
  for (std::size_t i = 0; i < d; ++i) {
    if (!(nu[i] > 0.0)) throw std::invalid_argument("precisions must be positive");
    omega[i] = std::sqrt(nu[i]);
    c[i] = std::cos(omega[i] * dt);
    s[i] = std::sin(omega[i] * dt);
    x[i] = x0[static_cast<Eigen::Index>(i)];
    p[i] = p0[static_cast<Eigen::Index>(i)];
  }
  const double scale = 1.0 / std::sqrt(static_cast<double>(d));
  for (std::size_t k = 0; k <= steps; ++k) {
    double D = 0.0;
    for (std::size_t i = 0; i < d; ++i) D += nu[i] * x[i] * p[i];
    visit(k, D * scale);
    if (k == steps) break;
    for (std::size_t i = 0; i < d; ++i) {
      const double xn = x[i] * c[i] + p[i] / omega[i] * s[i];
      const double pn = -x[i] * omega[i] * s[i] + p[i] * c[i];
      x[i] = xn;
      p[i] = pn;
    }
  }
}

}  // namespace

DotProductTrace exact_gaussian_trace(const std::vector<double>& nu, const Eigen::VectorXd& x0,
                                     const Eigen::VectorXd& p0, double dt, std::size_t steps) {
  DotProductTrace trace;
  trace.t.reserve(steps + 1);
  trace.D.reserve(steps + 1);
  harmonic_flow(nu, x0, p0, dt, steps, [&](std::size_t k, double D) {
    trace.t.push_back(static_cast<double>(k) * dt);
    trace.D.push_back(D);
  });
  trace.apogees = count_apogees(trace.D);
  trace.perigees = count_perigees(trace.D);
  return trace;
}

DotProductTrace leapfrog_trace(const TargetDensity& target, const Eigen::VectorXd& x0,
                               const Eigen::VectorXd& p0, double eps, std::size_t steps) {
  const MassMatrix mass = MassMatrix::identity(target.dimension());
  PhaseState z = make_phase_state(x0, p0, mass, target);
  WorkCounter work;
  const double scale = 1.0 / std::sqrt(static_cast<double>(target.dimension()));
  DotProductTrace trace;
  trace.t.push_back(0.0);
  trace.D.push_back(scale * z.du_dt);
  for (std::size_t k = 1; k <= steps; ++k) {
    leapfrog_step(z, z, eps, mass, target, work);
    trace.t.push_back(static_cast<double>(k) * eps);
    trace.D.push_back(scale * z.du_dt);
  }
  trace.apogees = count_apogees(trace.D);
  trace.perigees = count_perigees(trace.D);
  return trace;
}

RateEstimate apogee_rate_estimate(const PrecisionDistribution& mu, std::size_t dimension,
                                  double window, std::size_t replicates, std::uint64_t seed) {
  if (dimension < 1) throw std::invalid_argument("dimension must be positive");
  if (!(window > 0.0)) throw std::invalid_argument("time window must be positive");
  if (replicates < 2) throw std::invalid_argument("need at least two replicates");
  RateEstimate est;
  est.window = window;
  est.dimension = dimension;
  est.reference = apogee_rate_reference(mu);
  const double dt = 0.01 / std::sqrt(mu.max_value());
  const auto steps = static_cast<std::size_t>(std::ceil(window / dt));
  const double step = window / static_cast<double>(steps);

  std::vector<double> rates;
  for (std::size_t r = 0; r < replicates; ++r) {
    Rng rng(derive_seed(seed, r));
    std::vector<double> nu(dimension);
    Eigen::VectorXd x0(static_cast<Eigen::Index>(dimension));
    Eigen::VectorXd p0(static_cast<Eigen::Index>(dimension));
    for (std::size_t i = 0; i < dimension; ++i) {
      nu[i] = mu.sample(rng);
      x0[static_cast<Eigen::Index>(i)] = rng.normal() / std::sqrt(nu[i]);
      p0[static_cast<Eigen::Index>(i)] = rng.normal();
    }
    int count = 0;
    double prev = 0.0;
    harmonic_flow(nu, x0, p0, step, steps, [&](std::size_t k, double D) {
      if (k > 0 && prev > 0.0 && D < 0.0) ++count;
      prev = D;
    });
    est.counts.push_back(count);
    rates.push_back(static_cast<double>(count) / window);
  }
  double mean = 0.0;
  for (double v : rates) mean += v;
  mean /= static_cast<double>(rates.size());
  double ss = 0.0;
  for (double v : rates) ss += (v - mean) * (v - mean);
  est.rate = mean;
  est.se = std::sqrt(ss / static_cast<double>(rates.size() - 1) / static_cast<double>(rates.size()));
  est.window_warning = mean * window < 5.0;
  return est;
}

CovarianceEstimate covariance_estimate(const PrecisionDistribution& mu,
                                       const std::vector<double>& lags, std::size_t samples,
                                       std::uint64_t seed, double start_offset) {
  if (samples < 2) throw std::invalid_argument("need at least two samples");
  CovarianceEstimate est;
  est.lags = lags;
  std::vector<double> sum(lags.size(), 0.0), sum2(lags.size(), 0.0);
  Rng rng(seed);
  auto product_at = [](double nu, double x0, double p0, double t) {
    const double w = std::sqrt(nu);
    const double x = x0 * std::cos(w * t) + p0 / w * std::sin(w * t);
    const double p = -x0 * w * std::sin(w * t) + p0 * std::cos(w * t);
    return nu * x * p;
  };
  for (std::size_t n = 0; n < samples; ++n) {
    const double nu = mu.sample(rng);
    const double x0 = rng.normal() / std::sqrt(nu);
    const double p0 = rng.normal();
    const double base = product_at(nu, x0, p0, start_offset);
    for (std::size_t j = 0; j < lags.size(); ++j) {
      const double v = base * product_at(nu, x0, p0, start_offset + lags[j]);
      sum[j] += v;
      sum2[j] += v * v;
    }
  }
  const double N = static_cast<double>(samples);
  for (std::size_t j = 0; j < lags.size(); ++j) {
    const double m = sum[j] / N;
    const double var = std::max(0.0, (sum2[j] - N * m * m) / (N - 1.0));
    est.value.push_back(m);
    est.se.push_back(std::sqrt(var / N));
  }
  return est;
}

void write_apogee_csv(const RateEstimate& estimate, std::ostream& out) {
  out << "replicate,d,T,apogee_count,rate\n" << std::setprecision(12);
  for (std::size_t r = 0; r < estimate.counts.size(); ++r) {
    out << r << ',' << estimate.dimension << ',' << estimate.window << ','
        << estimate.counts[r] << ',' << estimate.counts[r] / estimate.window << '\n';
  }
}

void write_covariance_csv(const CovarianceEstimate& estimate, std::ostream& out) {
  out << "lag,V_hat,se\n" << std::setprecision(12);
  for (std::size_t j = 0; j < estimate.lags.size(); ++j) {
    out << estimate.lags[j] << ',' << estimate.value[j] << ',' << estimate.se[j] << '\n';
  }
}

}  // namespace aaps
