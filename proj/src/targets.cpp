#include "aaps/targets.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace aaps {

namespace {

constexpr double kLogSqrt2Pi = 0.91893853320467274178;
constexpr double kLowerTailSwitch = -20.0;

// 1 - 1/t^2 + 3/t^4 - 15/t^6 + ... ; the asymptotic factor in
// Phi(t) ~ phi(t)/(-t) * series(t) for t -> -inf.
double lower_tail_series(double t) {
  const double inv_t2 = 1.0 / (t * t);
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k <= 6; ++k) {
    term *= -(2.0 * k - 1.0) * inv_t2;
    sum += term;
  }
  return sum;
}

double softplus(double z) {
  return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
}

std::string lowercase(std::string text) {
  std::transform(text.begin(), text.end(), text.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return text;
}

}  // namespace

double normal_cdf(double t) { return 0.5 * std::erfc(-t / std::numbers::sqrt2); }

double log_normal_cdf(double t) {
  if (t >= kLowerTailSwitch) {
    return std::log(normal_cdf(t));
  }
  return -0.5 * t * t - kLogSqrt2Pi - std::log(-t) + std::log(lower_tail_series(t));
}

double inverse_mills_ratio(double t) {
  if (t >= kLowerTailSwitch) {
    const double log_phi = -0.5 * t * t - kLogSqrt2Pi;
    return std::exp(log_phi - log_normal_cdf(t));
  }
  return -t / lower_tail_series(t);
}

// ---------------------------------------------------------------------------

double TargetDensity::potential(const Eigen::VectorXd& x) const {
  Eigen::VectorXd grad(x.size());
  return potential_and_gradient(x, grad);
}

std::vector<std::string> TargetDensity::parameter_names() const {
  std::vector<std::string> names;
  names.reserve(dimension());
  for (std::size_t i = 1; i <= dimension(); ++i) {
    names.push_back("x_" + std::to_string(i));
  }
  return names;
}

Eigen::VectorXd TargetDensity::initial_point(Rng&) const {
  return Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dimension()));
}

// ---------------------------------------------------------------------------

std::string to_string(ComponentFamily family) {
  switch (family) {
    case ComponentFamily::Gaussian: return "gaussian";
    case ComponentFamily::Logistic: return "logistic";
    case ComponentFamily::SkewGaussian: return "skew_gaussian";
  }
  return "unknown";
}

std::string to_string(ProgressionKind kind) {
  switch (kind) {
    case ProgressionKind::SD: return "SD";
    case ProgressionKind::VAR: return "VAR";
    case ProgressionKind::H: return "H";
    case ProgressionKind::InvSD: return "invSD";
  }
  return "unknown";
}

ComponentFamily parse_component_family(const std::string& text) {
  const std::string t = lowercase(text);
  if (t == "gaussian" || t == "g") return ComponentFamily::Gaussian;
  if (t == "logistic" || t == "l") return ComponentFamily::Logistic;
  if (t == "skew_gaussian" || t == "skewgaussian" || t == "sg") {
    return ComponentFamily::SkewGaussian;
  }
  throw std::invalid_argument("unknown component family '" + text + "'");
}

ProgressionKind parse_progression_kind(const std::string& text) {
  const std::string t = lowercase(text);
  if (t == "sd") return ProgressionKind::SD;
  if (t == "var") return ProgressionKind::VAR;
  if (t == "h") return ProgressionKind::H;
  if (t == "invsd") return ProgressionKind::InvSD;
  throw std::invalid_argument("unknown scale progression '" + text +
                              "' (expected SD, VAR, H or invSD)");
}

// ---------------------------------------------------------------------------

void ScaleProgression::validate() const {
  if (!(xi > 1.0) || !std::isfinite(xi)) {
    throw std::invalid_argument("scale progression requires xi > 1");
  }
  if (dimension < 2) {
    throw std::invalid_argument("scale progression requires dimension >= 2");
  }
}

std::vector<double> ScaleProgression::positions() const {
  validate();
  std::vector<double> w(dimension);
  Rng rng(jitter_seed);
  const double denom = static_cast<double>(dimension - 1);
  w.front() = 0.0;
  w.back() = 1.0;
  for (std::size_t i = 1; i + 1 < dimension; ++i) {
    const double jitter = rng.uniform() - 0.5;
    w[i] = (static_cast<double>(i) + jitter) / denom;
  }
  return w;
}

std::vector<double> ScaleProgression::scales() const {
  const std::vector<double> w = positions();
  std::vector<double> sigma(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) {
    switch (kind) {
      case ProgressionKind::SD:
        sigma[i] = (xi - 1.0) * w[i] + 1.0;
        break;
      case ProgressionKind::VAR:
        sigma[i] = std::sqrt((xi * xi - 1.0) * w[i] + 1.0);
        break;
      case ProgressionKind::H:
        sigma[i] = 1.0 / std::sqrt((1.0 - 1.0 / (xi * xi)) * w[i] + 1.0 / (xi * xi));
        break;
      case ProgressionKind::InvSD:
        sigma[i] = 1.0 / ((1.0 - 1.0 / xi) * w[i] + 1.0 / xi);
        break;
    }
  }
  return sigma;
}

// ---------------------------------------------------------------------------

ProductTarget::ProductTarget(ComponentFamily family, std::vector<double> scales,
                             double skew_alpha, std::string label)
    : family_(family),
      scales_(std::move(scales)),
      skew_alpha_(skew_alpha),
      label_(std::move(label)) {
  if (scales_.empty()) {
    throw std::invalid_argument("product target needs at least one component");
  }
  inv_scales_.resize(static_cast<Eigen::Index>(scales_.size()));
  for (std::size_t i = 0; i < scales_.size(); ++i) {
    if (!(scales_[i] > 0.0) || !std::isfinite(scales_[i])) {
      throw std::invalid_argument("product target scales must be positive and finite");
    }
    inv_scales_[static_cast<Eigen::Index>(i)] = 1.0 / scales_[i];
  }
}

double ProductTarget::component_potential(double z) const {
  switch (family_) {
    case ComponentFamily::Gaussian:
      return 0.5 * z * z;
    case ComponentFamily::Logistic:
      return -z + 2.0 * softplus(z);
    case ComponentFamily::SkewGaussian:
      return 0.5 * z * z - log_normal_cdf(skew_alpha_ * z);
  }
  return 0.0;
}

double ProductTarget::component_derivative(double z) const {
  switch (family_) {
    case ComponentFamily::Gaussian:
      return z;
    case ComponentFamily::Logistic:
      return std::tanh(0.5 * z);
    case ComponentFamily::SkewGaussian:
      return z - skew_alpha_ * inverse_mills_ratio(skew_alpha_ * z);
  }
  return 0.0;
}

double ProductTarget::potential_and_gradient(const Eigen::VectorXd& x,
                                             Eigen::VectorXd& grad) const {
  const Eigen::Index d = x.size();
  grad.resize(d);
  double u = 0.0;
  switch (family_) {
    case ComponentFamily::Gaussian:
      for (Eigen::Index i = 0; i < d; ++i) {
        const double z = x[i] * inv_scales_[i];
        u += 0.5 * z * z;
        grad[i] = z * inv_scales_[i];
      }
      break;
    default:
      for (Eigen::Index i = 0; i < d; ++i) {
        const double z = x[i] * inv_scales_[i];
        u += component_potential(z);
        grad[i] = component_derivative(z) * inv_scales_[i];
      }
      break;
  }
  return u;
}

double ProductTarget::potential(const Eigen::VectorXd& x) const {
  double u = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    u += component_potential(x[i] * inv_scales_[i]);
  }
  return u;
}

std::string ProductTarget::name() const {
  if (!label_.empty()) return label_;
  return to_string(family_) + "_d" + std::to_string(scales_.size());
}

Eigen::VectorXd ProductTarget::initial_point(Rng& rng) const {
  Eigen::VectorXd x(static_cast<Eigen::Index>(scales_.size()));
  const double delta = skew_alpha_ / std::sqrt(1.0 + skew_alpha_ * skew_alpha_);
  for (std::size_t i = 0; i < scales_.size(); ++i) {
    double z = 0.0;
    switch (family_) {
      case ComponentFamily::Gaussian:
        z = rng.normal();
        break;
      case ComponentFamily::Logistic: {
        double u = rng.uniform();
        while (u <= 0.0) u = rng.uniform();
        z = std::log(u) - std::log1p(-u);
        break;
      }
      case ComponentFamily::SkewGaussian: {
        const double u0 = rng.normal();
        const double u1 = rng.normal();
        z = delta * std::abs(u0) + std::sqrt(1.0 - delta * delta) * u1;
        break;
      }
    }
    x[static_cast<Eigen::Index>(i)] = scales_[i] * z;
  }
  return x;
}

TargetPtr make_product_target(ComponentFamily family, const ScaleProgression& progression,
                              double skew_alpha) {
  progression.validate();
  std::ostringstream label;
  label << to_string(family) << "_" << to_string(progression.kind) << "_d"
        << progression.dimension << "_xi" << progression.xi;
  return std::make_shared<ProductTarget>(family, progression.scales(), skew_alpha, label.str());
}

TargetPtr make_radford_neal_gaussian(std::size_t dimension, double xi) {
  if (dimension < 1) throw std::invalid_argument("dimension must be positive");
  if (!(xi >= 1.0) || !std::isfinite(xi)) {
    throw std::invalid_argument("Neal Gaussian requires xi >= 1");
  }
  std::vector<double> scales(dimension, 1.0);
  if (dimension > 1) {
    for (std::size_t i = 0; i < dimension; ++i) {
      scales[i] = 1.0 + (xi - 1.0) * static_cast<double>(i) / static_cast<double>(dimension - 1);
    }
  }
  std::ostringstream label;
  label << "gaussian_RN_d" << dimension << "_xi" << xi;
  return std::make_shared<ProductTarget>(ComponentFamily::Gaussian, std::move(scales), 3.0,
                                         label.str());
}

// ---------------------------------------------------------------------------

double rosenbrock_scale_squared(std::size_t pair_index, std::size_t dimension) {
  if (dimension < 2 || dimension % 2 != 0) {
    throw std::invalid_argument("modified Rosenbrock requires an even dimension");
  }
  const std::size_t pairs = dimension / 2;
  if (pair_index < 1 || pair_index > pairs) {
    throw std::out_of_range("Rosenbrock pair index out of range");
  }
  if (pairs == 1) return 1.0;
  return 99.0 * static_cast<double>(pair_index - 1) / static_cast<double>(pairs - 1) + 1.0;
}

ModifiedRosenbrock::ModifiedRosenbrock(std::size_t dimension, double beta) : beta_(beta) {
  if (dimension < 2 || dimension % 2 != 0) {
    throw std::invalid_argument("modified Rosenbrock requires an even dimension");
  }
  for (std::size_t i = 1; i <= dimension / 2; ++i) {
    s_.push_back(std::sqrt(rosenbrock_scale_squared(i, dimension)));
  }
}

ModifiedRosenbrock::ModifiedRosenbrock(std::vector<double> pair_scales_squared, double beta)
    : beta_(beta) {
  if (pair_scales_squared.empty()) {
    throw std::invalid_argument("modified Rosenbrock needs at least one pair");
  }
  for (double s2 : pair_scales_squared) {
    if (!(s2 > 0.0)) throw std::invalid_argument("Rosenbrock scales must be positive");
    s_.push_back(std::sqrt(s2));
  }
}

double ModifiedRosenbrock::potential_and_gradient(const Eigen::VectorXd& x,
                                                  Eigen::VectorXd& grad) const {
  grad.resize(x.size());
  double u = 0.0;
  for (std::size_t i = 0; i < s_.size(); ++i) {
    const auto ia = static_cast<Eigen::Index>(2 * i);
    const double s = s_[i];
    const double a = x[ia];
    const double b = x[ia + 1];
    const double centre = std::numbers::sqrt2 * beta_ * s;
    const double q = a * a / (4.0 * s * s);
    const double f = a * a / (std::numbers::sqrt2 * s * (1.0 + q));
    const double df = 2.0 * a / (std::numbers::sqrt2 * s * (1.0 + q) * (1.0 + q));
    const double r = b - f;
    u += (a - centre) * (a - centre) / (2.0 * s * s) + 0.5 * r * r;
    grad[ia] = (a - centre) / (s * s) - r * df;
    grad[ia + 1] = r;
  }
  return u;
}

std::string ModifiedRosenbrock::name() const {
  return "rosenbrock_d" + std::to_string(dimension());
}

Eigen::VectorXd ModifiedRosenbrock::initial_point(Rng& rng) const {
  Eigen::VectorXd x(static_cast<Eigen::Index>(dimension()));
  for (std::size_t i = 0; i < s_.size(); ++i) {
    const double s = s_[i];
    const double a = std::numbers::sqrt2 * beta_ * s + s * rng.normal();
    const double q = a * a / (4.0 * s * s);
    const double f = a * a / (std::numbers::sqrt2 * s * (1.0 + q));
    x[static_cast<Eigen::Index>(2 * i)] = a;
    x[static_cast<Eigen::Index>(2 * i + 1)] = f + rng.normal();
  }
  return x;
}

TargetPtr make_modified_rosenbrock(std::size_t dimension, double beta) {
  return std::make_shared<ModifiedRosenbrock>(dimension, beta);
}

// ---------------------------------------------------------------------------

BimodalMixture::BimodalMixture(std::size_t dimension, double separation, double second_variance)
    : d_(dimension), a_(separation), v2_(second_variance) {
  if (dimension < 1) throw std::invalid_argument("bimodal target requires dimension >= 1");
  if (!std::isfinite(separation)) throw std::invalid_argument("separation must be finite");
  if (!(second_variance > 0.0)) throw std::invalid_argument("variance must be positive");
}

double BimodalMixture::potential_and_gradient(const Eigen::VectorXd& x,
                                              Eigen::VectorXd& grad) const {
  grad.resize(x.size());
  double r1 = 0.0;  // |x - m1|^2
  double r2 = 0.0;  // |x - m2|^2
  const double rest = x.tail(x.size() - 1).squaredNorm();
  r1 = (x[0] + a_) * (x[0] + a_) + rest;
  r2 = (x[0] - a_) * (x[0] - a_) + rest;
  const double l1 = -0.5 * r1;
  const double l2 = -0.5 * static_cast<double>(d_) * std::log(v2_) - 0.5 * r2 / v2_;
  const double top = std::max(l1, l2);
  const double lse = top + std::log(std::exp(l1 - top) + std::exp(l2 - top));
  const double w1 = std::exp(l1 - lse);
  const double w2 = std::exp(l2 - lse);
  grad = (w1 + w2 / v2_) * x;
  grad[0] += w1 * a_ - w2 * a_ / v2_;
  return -lse;
}

std::string BimodalMixture::name() const {
  std::ostringstream out;
  out << "bimodal_d" << d_ << "_a" << a_;
  return out.str();
}

Eigen::VectorXd BimodalMixture::initial_point(Rng& rng) const {
  const bool second = rng.uniform() < 0.5;
  const double sd = second ? std::sqrt(v2_) : 1.0;
  Eigen::VectorXd x(static_cast<Eigen::Index>(d_));
  for (Eigen::Index i = 0; i < x.size(); ++i) x[i] = sd * rng.normal();
  x[0] += second ? a_ : -a_;
  return x;
}

TargetPtr make_bimodal(std::size_t dimension, double separation) {
  return std::make_shared<BimodalMixture>(dimension, separation);
}

}  // namespace aaps
