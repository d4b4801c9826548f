#include "aaps/sv_model.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace aaps {

namespace {

constexpr double kGammaShape = 10.0;
constexpr double kGammaRate = 0.05;
constexpr double kBetaA = 20.0;
constexpr double kBetaB = 1.5;

double logistic(double a) {
  return a >= 0.0 ? 1.0 / (1.0 + std::exp(-a)) : std::exp(a) / (1.0 + std::exp(a));
}

double log_logistic(double a) {
  return a >= 0.0 ? -std::log1p(std::exp(-a)) : a - std::log1p(std::exp(a));
}

}  // namespace

SVModelData simulate_sv_data(std::size_t length, double phi, double kappa, double sigma,
                             std::uint64_t seed) {
  if (length < 1) throw std::invalid_argument("SV series length must be positive");
  if (!(std::abs(phi) < 1.0)) {
    throw std::invalid_argument("SV simulation requires |phi| < 1 for a stationary start");
  }
  if (!(kappa > 0.0)) throw std::invalid_argument("SV simulation requires kappa > 0");
  if (!(sigma > 0.0)) throw std::invalid_argument("SV simulation requires sigma > 0");

  Rng rng(seed);
  SvTruth truth{phi, kappa, sigma, std::vector<double>(length)};
  SVModelData data;
  data.y.resize(length);
  double x = sigma / std::sqrt(1.0 - phi * phi) * rng.normal();
  for (std::size_t t = 0; t < length; ++t) {
    if (t > 0) x = phi * x + sigma * rng.normal();
    truth.latent[t] = x;
    data.y[t] = kappa * std::exp(0.5 * x) * rng.normal();
  }
  data.truth = std::move(truth);
  return data;
}

void write_sv_csv(const SVModelData& data, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << "t,y\n" << std::setprecision(17);
  for (std::size_t t = 0; t < data.y.size(); ++t) {
    out << (t + 1) << ',' << data.y[t] << '\n';
  }
}

SVModelData read_sv_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open SV data file '" + path + "'");
  std::string line;
  std::getline(in, line);
  if (line.rfind("t,y", 0) != 0) {
    throw std::runtime_error("SV data file '" + path + "' must start with header t,y");
  }
  SVModelData data;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) {
      throw std::runtime_error("malformed SV data row " + std::to_string(row));
    }
    data.y.push_back(std::stod(line.substr(comma + 1)));
  }
  return data;
}

// ---------------------------------------------------------------------------

SvPosterior::SvPosterior(SVModelData data) : data_(std::move(data)) {
  const std::size_t T = data_.y.size();
  if (T < 2) throw std::invalid_argument("SV posterior requires at least two observations");
  y2_.resize(static_cast<Eigen::Index>(T));
  for (std::size_t t = 0; t < T; ++t) {
    if (!std::isfinite(data_.y[t])) {
      throw std::invalid_argument("SV observations must be finite (row " +
                                  std::to_string(t + 1) + ")");
    }
    y2_[static_cast<Eigen::Index>(t)] = data_.y[t] * data_.y[t];
  }
}

Eigen::Vector3d SvPosterior::to_unconstrained(double phi, double kappa, double sigma) {
  return {std::log((1.0 + phi) / (1.0 - phi)), std::log(kappa), 2.0 * std::log(sigma)};
}

double SvPosterior::potential_and_gradient(const Eigen::VectorXd& theta,
                                           Eigen::VectorXd& grad) const {
  const Eigen::Index T = y2_.size();
  grad.resize(T + 3);
  const double alpha = theta[0];
  const double beta = theta[1];
  const double gamma = theta[2];
  const auto x = theta.tail(T);

  const double u = logistic(alpha);
  const double phi = std::tanh(0.5 * alpha);
  // 1 - phi^2 = 4 u (1 - u), kept in log form for large |alpha|.
  const double log_one_minus_phi2 = std::log(4.0) + log_logistic(alpha) + log_logistic(-alpha);
  const double one_minus_phi2 = std::exp(log_one_minus_phi2);
  const double tau = std::exp(-gamma);

  double logp = 0.0;
  double dbeta = 0.0;
  auto gx = grad.tail(T);

  for (Eigen::Index t = 0; t < T; ++t) {
    const double scaled = y2_[t] * std::exp(-2.0 * beta - x[t]);
    logp += -beta - 0.5 * x[t] - 0.5 * scaled;
    dbeta += -1.0 + scaled;
    gx[t] = -0.5 + 0.5 * scaled;
  }

  double innovations = 0.0;  // sum_{t>=2} (x_t - phi x_{t-1})^2
  double cross = 0.0;        // sum_{t>=2} (x_t - phi x_{t-1}) x_{t-1}
  for (Eigen::Index t = 1; t < T; ++t) {
    const double e = x[t] - phi * x[t - 1];
    innovations += e * e;
    cross += e * x[t - 1];
    gx[t] -= tau * e;
    gx[t - 1] += tau * phi * e;
  }
  const double x1 = x[0];
  gx[0] -= tau * one_minus_phi2 * x1;

  logp += -0.5 * static_cast<double>(T) * gamma + 0.5 * log_one_minus_phi2 -
          0.5 * x1 * x1 * one_minus_phi2 * tau - 0.5 * tau * innovations;
  logp += -kGammaShape * gamma - kGammaRate * tau;
  logp += kBetaA * log_logistic(alpha) + kBetaB * log_logistic(-alpha);

  const double dgamma = -0.5 * static_cast<double>(T) + 0.5 * x1 * x1 * one_minus_phi2 * tau +
                        0.5 * tau * innovations - kGammaShape + kGammaRate * tau;
  const double dphi = -phi / one_minus_phi2 + x1 * x1 * phi * tau + tau * cross;
  const double dalpha = dphi * 0.5 * one_minus_phi2 + kBetaA * (1.0 - u) - kBetaB * u;

  grad[0] = -dalpha;
  grad[1] = -dbeta;
  grad[2] = -dgamma;
  gx = -gx;
  return -logp;
}

std::string SvPosterior::name() const { return "sv_T" + std::to_string(y2_.size()); }

std::vector<std::string> SvPosterior::parameter_names() const {
  std::vector<std::string> names{"alpha", "beta", "gamma"};
  for (Eigen::Index t = 1; t <= y2_.size(); ++t) names.push_back("x_" + std::to_string(t));
  return names;
}

Eigen::VectorXd SvPosterior::initial_point(Rng&) const {
  const Eigen::Index T = y2_.size();
  Eigen::VectorXd theta = Eigen::VectorXd::Zero(T + 3);
  if (data_.truth) {
    const SvTruth& truth = *data_.truth;
    theta.head<3>() = to_unconstrained(truth.phi, truth.kappa, truth.sigma);
    if (truth.latent.size() == static_cast<std::size_t>(T)) {
      for (Eigen::Index t = 0; t < T; ++t) theta[3 + t] = truth.latent[static_cast<std::size_t>(t)];
    }
  } else {
    theta[0] = 3.0;
    theta[1] = 0.5 * std::log(y2_.mean());
    theta[2] = 2.0 * std::log(0.2);
  }
  return theta;
}

TargetPtr make_sv_posterior(SVModelData data) {
  return std::make_shared<SvPosterior>(std::move(data));
}

}  // namespace aaps
