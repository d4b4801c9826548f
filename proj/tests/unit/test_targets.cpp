#include <doctest.h>

#include <cmath>
#include <numbers>

#include "aaps/sv_model.hpp"
#include "aaps/targets.hpp"
#include "helpers.hpp"

using namespace aaps;
using Eigen::VectorXd;

namespace {

VectorXd random_point(std::size_t d, Rng& rng, double scale) {
  VectorXd x(d);
  for (std::size_t i = 0; i < d; ++i) x[i] = scale * rng.normal();
  return x;
}

}  // namespace

TEST_CASE("gradients match finite differences on every target") {
  Rng rng(11);
  ScaleProgression prog;
  prog.dimension = 12;
  prog.xi = 20;
  std::vector<TargetPtr> targets;
  for (auto fam : {ComponentFamily::Gaussian, ComponentFamily::Logistic, ComponentFamily::SkewGaussian}) {
    for (auto kind : {ProgressionKind::SD, ProgressionKind::VAR, ProgressionKind::H, ProgressionKind::InvSD}) {
      prog.kind = kind;
      targets.push_back(make_product_target(fam, prog));
    }
  }
  targets.push_back(make_radford_neal_gaussian(30, 110));
  targets.push_back(make_modified_rosenbrock(8));
  targets.push_back(make_bimodal(6, 7.0));
  targets.push_back(make_sv_posterior(simulate_sv_data(20, 0.98, 0.65, 0.15, 3)));
  for (const auto& t : targets) {
    for (int rep = 0; rep < 5; ++rep) {
      const VectorXd x = random_point(t->dimension(), rng, 1.5);
      INFO(t->name());
      CHECK(std::isfinite(t->potential(x)));
      CHECK(testutil::gradient_error(*t, x) < 1e-5);
    }
  }
}

TEST_CASE("potential is finite far from the mode") {
  ScaleProgression prog;
  prog.dimension = 5;
  for (auto fam : {ComponentFamily::Gaussian, ComponentFamily::Logistic, ComponentFamily::SkewGaussian}) {
    const auto t = make_product_target(fam, prog);
    CHECK(std::isfinite(t->potential(VectorXd::Constant(5, -300.0))));
    CHECK(std::isfinite(t->potential(VectorXd::Constant(5, 300.0))));
  }
  CHECK(std::isfinite(make_bimodal(3, 15.0)->potential(VectorXd::Constant(3, 1e3))));
}

TEST_CASE("standard normal component") {
  ProductTarget t(ComponentFamily::Gaussian, {1.0});
  VectorXd x(1), g;
  x[0] = 2.0;
  const double u2 = t.potential_and_gradient(x, g);
  CHECK(g[0] == doctest::Approx(2.0).epsilon(1e-14));
  x[0] = 0.0;
  CHECK(u2 - t.potential(x) == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("logistic component is symmetric at zero") {
  ProductTarget t(ComponentFamily::Logistic, {1.0});
  VectorXd x = VectorXd::Zero(1), g;
  t.potential_and_gradient(x, g);
  CHECK(std::abs(g[0]) < 1e-15);
}

TEST_CASE("skew normal gradient against the stated density") {
  ProductTarget t(ComponentFamily::SkewGaussian, {1.0}, 3.0);
  auto u = [](double x) {
    const double pdf = std::exp(-0.5 * x * x) / std::sqrt(2 * std::numbers::pi);
    return -std::log(2.0 * pdf * testutil::phi_cdf(3.0 * x));
  };
  const double h = 1e-5;
  const double oracle = (u(0.5 + h) - u(0.5 - h)) / (2 * h);
  VectorXd x(1), g;
  x[0] = 0.5;
  t.potential_and_gradient(x, g);
  CHECK(std::abs(g[0] - oracle) < 1e-6);
}

TEST_CASE("scale progressions") {
  for (auto kind : {ProgressionKind::SD, ProgressionKind::VAR, ProgressionKind::H, ProgressionKind::InvSD}) {
    ScaleProgression p;
    p.kind = kind;
    p.dimension = 40;
    p.xi = 20;
    p.jitter_seed = 5;
    const auto w = p.positions();
    CHECK(w.front() == 0.0);
    CHECK(w.back() == 1.0);
    for (std::size_t i = 1; i + 1 < w.size(); ++i) {
      const double u = w[i] * 39.0 - static_cast<double>(i);
      CHECK(u >= -0.5);
      CHECK(u < 0.5);
    }
    const auto s = p.scales();
    const double hi = *std::max_element(s.begin(), s.end());
    const double lo = *std::min_element(s.begin(), s.end());
    CHECK(hi / lo == doctest::Approx(20.0).epsilon(1e-12));
    CHECK(p.scales() == s);
    // Which transform of sigma is linear in w.
    auto lin = [&](double v) {
      switch (kind) {
        case ProgressionKind::SD: return v;
        case ProgressionKind::VAR: return v * v;
        case ProgressionKind::H: return 1.0 / (v * v);
        case ProgressionKind::InvSD: return 1.0 / v;
      }
      return v;
    };
    const double a = lin(s.front()), b = lin(s.back());
    for (std::size_t i = 0; i < s.size(); ++i) {
      CHECK(lin(s[i]) == doctest::Approx(a + (b - a) * w[i]).epsilon(1e-12));
    }
  }
  ScaleProgression bad;
  bad.xi = 1.0;
  CHECK_THROWS_AS(bad.scales(), std::invalid_argument);
}

TEST_CASE("Neal benchmark Gaussian") {
  auto t = std::dynamic_pointer_cast<const ProductTarget>(make_radford_neal_gaussian(30, 110));
  REQUIRE(t);
  const auto& s = t->scales();
  CHECK(*std::max_element(s.begin(), s.end()) / *std::min_element(s.begin(), s.end()) ==
        doctest::Approx(110.0).epsilon(1e-12));
  CHECK(s[1] == doctest::Approx(1.0 + 109.0 / 29.0).epsilon(1e-14));
  auto iso = std::dynamic_pointer_cast<const ProductTarget>(make_radford_neal_gaussian(2, 1));
  CHECK(iso->scales() == std::vector<double>{1.0, 1.0});
}

TEST_CASE("modified Rosenbrock scales and gradient") {
  CHECK(rosenbrock_scale_squared(1, 2) == 1.0);
  CHECK(rosenbrock_scale_squared(2, 4) == doctest::Approx(100.0));
  CHECK(rosenbrock_scale_squared(1, 40) == 1.0);
  CHECK(rosenbrock_scale_squared(20, 40) == doctest::Approx(100.0));
  CHECK_THROWS(make_modified_rosenbrock(5));
  const auto t = make_modified_rosenbrock(4);
  VectorXd x(4);
  x << 1, 1, 0, 0;
  CHECK(testutil::gradient_error(*t, x) < 1e-5);
}

TEST_CASE("bimodal mixture") {
  // Closed-form two-component gradient, d = 1.
  auto oracle = [](double x, double a, double v) {
    const double n1 = std::exp(-0.5 * (x + a) * (x + a));
    const double n2 = std::exp(-0.5 * (x - a) * (x - a) / v) / std::sqrt(v);
    return (n1 * (x + a) + n2 * (x - a) / v) / (n1 + n2);
  };
  for (double a : {0.0, 2.0}) {
    BimodalMixture t(1, a);
    for (double x : {0.0, 0.3, -1.7}) {
      VectorXd p(1), g;
      p[0] = x;
      t.potential_and_gradient(p, g);
      CHECK(g[0] == doctest::Approx(oracle(x, a, 100.0)).epsilon(1e-12));
    }
  }
  BimodalMixture flat(1, 0.0);
  VectorXd z = VectorXd::Zero(1), g;
  flat.potential_and_gradient(z, g);
  CHECK(std::abs(g[0]) < 1e-15);

  const auto t = make_bimodal(40, 7.0);
  VectorXd c = VectorXd::Zero(40);
  c[0] = 7.0;
  CHECK(std::isfinite(t->potential(c)));
  CHECK(testutil::gradient_error(*t, c) < 1e-5);
  c[0] = -7.0;
  CHECK(std::isfinite(t->potential(c)));
}

TEST_CASE("stochastic volatility data and posterior") {
  const auto a = simulate_sv_data(1000, 0.98, 0.65, 0.15, 42);
  const auto b = simulate_sv_data(1000, 0.98, 0.65, 0.15, 42);
  CHECK(a.y == b.y);
  CHECK(a.y.size() == 1000);
  CHECK_THROWS_AS(simulate_sv_data(10, 0.98, 0.65, 0.0, 1), std::invalid_argument);

  const auto post = make_sv_posterior(a);
  CHECK(post->dimension() == 1003);
  CHECK(post->parameter_names()[0] == "alpha");

  // Gradient at the generating parameters with x = 0.
  VectorXd theta = VectorXd::Zero(1003);
  theta.head<3>() = SvPosterior::to_unconstrained(0.98, 0.65, 0.15);
  CHECK(testutil::gradient_error(*post, theta) < 1e-4);

  // Inverse maps.
  const Eigen::Vector3d u = SvPosterior::to_unconstrained(0.98, 0.65, 0.15);
  CHECK((std::exp(u[0]) - 1) / (std::exp(u[0]) + 1) == doctest::Approx(0.98).epsilon(1e-13));
  CHECK(std::exp(u[1]) == doctest::Approx(0.65).epsilon(1e-13));
  CHECK(std::exp(u[2]) == doctest::Approx(0.0225).epsilon(1e-13));
}

TEST_CASE("stochastic volatility latent variance") {
  const double phi = 0.98, sigma = 0.15;
  const auto d = simulate_sv_data(100000, phi, 0.65, sigma, 7);
  REQUIRE(d.truth);
  const auto& x = d.truth->latent;
  double m = 0.0;
  for (double v : x) m += v;
  m /= x.size();
  double var = 0.0;
  for (double v : x) var += (v - m) * (v - m);
  var /= x.size() - 1;
  const double target = sigma * sigma / (1 - phi * phi);
  // Large-sample sd of the sample variance of a Gaussian AR(1).
  const double se = target * std::sqrt(2.0 * (1 + phi * phi) / (1 - phi * phi) / x.size());
  CHECK(std::abs(var - target) < 3 * se);
}

TEST_CASE("SV csv round trip") {
  const auto d = simulate_sv_data(50, 0.9, 0.7, 0.2, 9);
  const std::string path = "sv_roundtrip_test.csv";
  write_sv_csv(d, path);
  const auto r = read_sv_csv(path);
  REQUIRE(r.y.size() == d.y.size());
  for (std::size_t i = 0; i < d.y.size(); ++i) CHECK(r.y[i] == d.y[i]);
  std::remove(path.c_str());
}
