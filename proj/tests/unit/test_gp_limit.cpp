#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "aaps/gp_limit.hpp"

using namespace aaps;
using Eigen::VectorXd;
constexpr double kPi = std::numbers::pi;

TEST_CASE("precision laws") {
  const auto c = PrecisionDistribution::constant(2.0);
  CHECK(c.mean() == 2.0);
  CHECK(c.second_moment() == 4.0);
  const auto tp = PrecisionDistribution::two_point(1.0, 9.0);
  CHECK(tp.mean() == doctest::Approx(5.0));
  CHECK(tp.second_moment() == doctest::Approx(41.0));
  CHECK(tp.max_value() == 9.0);
  const auto u = PrecisionDistribution::uniform(1.0, 3.0);
  CHECK(u.mean() == doctest::Approx(2.0));
  CHECK(u.second_moment() == doctest::Approx(13.0 / 3.0));
  CHECK(u.expect([](double v) { return v * v; }) == doctest::Approx(13.0 / 3.0).epsilon(1e-12));
  CHECK(tp.scaled(4.0).mean() == doctest::Approx(20.0));
  CHECK_THROWS(PrecisionDistribution::constant(0.0));
  CHECK_THROWS(PrecisionDistribution::two_point(1.0, 2.0, 1.5));
  Rng rng(1);
  for (int i = 0; i < 100; ++i) {
    const double v = u.sample(rng);
    CHECK(v >= 1.0);
    CHECK(v <= 3.0);
  }
}

TEST_CASE("reference rate and covariance") {
  CHECK(apogee_rate_reference(PrecisionDistribution::constant(1.0)) == doctest::Approx(1.0 / kPi));
  CHECK(apogee_rate_reference(PrecisionDistribution::two_point(1.0, 9.0)) ==
        doctest::Approx(std::sqrt(41.0 / 5.0) / kPi));
  for (double t : {0.0, 0.3, 1.7}) {
    CHECK(covariance_reference(PrecisionDistribution::constant(1.0), t) ==
          doctest::Approx(std::cos(2 * t)).epsilon(1e-14));
  }
  CHECK(covariance_reference(PrecisionDistribution::two_point(1.0, 9.0), 0.0) == doctest::Approx(5.0));
  // Uniform law against a closed form: E[nu cos(2 sqrt(nu) t)] for nu ~ U(1, 4).
  const double t = 0.4;
  auto F = [&](double w) {  // antiderivative in w = sqrt(nu) of 2 w^3 cos(2 w t) / 3
    const double a = 2 * t;
    return 2.0 / 3.0 *
           ((w * w * w / a - 6 * w / (a * a * a)) * std::sin(a * w) +
            (3 * w * w / (a * a) - 6 / (a * a * a * a)) * std::cos(a * w));
  };
  CHECK(covariance_reference(PrecisionDistribution::uniform(1.0, 4.0), t) ==
        doctest::Approx(F(2.0) - F(1.0)).epsilon(1e-9));
}

TEST_CASE("sign change counting") {
  CHECK(count_apogees({1, 2, -1, -2, 3, -0.5}) == 2);
  CHECK(count_perigees({1, 2, -1, -2, 3, -0.5}) == 1);
  CHECK(count_apogees({1, 0, -1}) == 0);
  CHECK(count_apogees({}) == 0);
}

TEST_CASE("single harmonic component") {
  VectorXd x0(1), p0(1);
  x0[0] = 0.0;
  p0[0] = 1.0;
  const double dt = 0.001;
  const DotProductTrace tr = exact_gaussian_trace({1.0}, x0, p0, dt, 4000);
  for (std::size_t k = 0; k < tr.D.size(); k += 97) {
    CHECK(tr.D[k] == doctest::Approx(std::sin(tr.t[k]) * std::cos(tr.t[k])).epsilon(1e-10).scale(1));
  }
  std::size_t first = 0;
  for (std::size_t k = 1; k < tr.D.size(); ++k) {
    if (tr.D[k - 1] > 0 && tr.D[k] < 0) {
      first = k;
      break;
    }
  }
  CHECK(std::abs(tr.t[first] - kPi / 2) <= dt);
}

TEST_CASE("equal precisions give a trace of period pi") {
  Rng rng(2);
  const std::size_t d = 7;
  VectorXd x0(d), p0(d);
  for (std::size_t i = 0; i < d; ++i) {
    x0[i] = rng.normal() / 2;
    p0[i] = rng.normal();
  }
  const double dt = kPi / 1000;
  const DotProductTrace tr = exact_gaussian_trace(std::vector<double>(d, 4.0), x0, p0, dt, 1000);
  // sqrt(nu) = 2 halves the period to pi/2.
  for (std::size_t k = 0; k + 500 < tr.D.size(); k += 50) CHECK(std::abs(tr.D[k] - tr.D[k + 500]) < 1e-10);
  const DotProductTrace one = exact_gaussian_trace(std::vector<double>(d, 1.0), x0, p0, dt, 2000);
  for (std::size_t k = 0; k + 1000 < one.D.size(); k += 50) CHECK(std::abs(one.D[k] - one.D[k + 1000]) < 1e-10);
}

TEST_CASE("leapfrog trace follows the exact trace") {
  Rng rng(3);
  const std::vector<double> nu = {1.0, 2.0, 0.5};
  VectorXd x0(3), p0(3);
  for (int i = 0; i < 3; ++i) {
    x0[i] = rng.normal();
    p0[i] = rng.normal();
  }
  ProductTarget t(ComponentFamily::Gaussian, {1.0, 1.0 / std::sqrt(2.0), std::sqrt(2.0)});
  const DotProductTrace lf = leapfrog_trace(t, x0, p0, 0.001, 5000);
  const DotProductTrace ex = exact_gaussian_trace(nu, x0, p0, 0.001, 5000);
  double worst = 0.0;
  for (std::size_t k = 0; k < lf.D.size(); ++k) worst = std::max(worst, std::abs(lf.D[k] - ex.D[k]));
  CHECK(worst < 1e-4);
}

TEST_CASE("apogee rate for unit precisions") {
  const auto est = apogee_rate_estimate(PrecisionDistribution::constant(1.0), 100, 300.0, 10, 4);
  CHECK(est.reference == doctest::Approx(1 / kPi));
  CHECK(std::abs(est.rate / est.reference - 1.0) < 0.03);
  CHECK(est.counts.size() == 10);
  CHECK_FALSE(est.window_warning);
  const auto tiny = apogee_rate_estimate(PrecisionDistribution::constant(1.0), 5, 3.0, 3, 4);
  CHECK(tiny.window_warning);
}

TEST_CASE("scaling the precisions by four doubles the rate") {
  const auto base = PrecisionDistribution::two_point(1.0, 3.0);
  const auto a = apogee_rate_estimate(base, 50, 400.0, 10, 5);
  // Same seed: the scaled system runs the same trace at twice the speed.
  const auto b = apogee_rate_estimate(base.scaled(4.0), 50, 400.0, 10, 5);
  CHECK(std::abs(b.rate / a.rate / 2.0 - 1.0) < 0.03);
}

TEST_CASE("covariance of the limiting process") {
  const std::vector<double> lags = {0.0, kPi / 4, 0.5};
  const auto one = covariance_estimate(PrecisionDistribution::constant(1.0), lags, 200000, 7);
  CHECK(std::abs(one.value[0] - 1.0) < 4 * one.se[0]);
  CHECK(std::abs(one.value[1]) < 4 * one.se[1]);
  CHECK(std::abs(one.value[2] - std::cos(1.0)) < 4 * one.se[2]);

  const auto mu = PrecisionDistribution::two_point(1.0, 9.0);
  const auto tp = covariance_estimate(mu, lags, 200000, 8);
  CHECK(std::abs(tp.value[0] - mu.mean()) < 4 * tp.se[0]);
  for (std::size_t j = 0; j < lags.size(); ++j) {
    CHECK(std::abs(tp.value[j] - covariance_reference(mu, lags[j])) < 4 * tp.se[j]);
  }
  const auto shifted = covariance_estimate(mu, lags, 200000, 9, 3.7);
  for (std::size_t j = 0; j < lags.size(); ++j) {
    const double se = std::hypot(tp.se[j], shifted.se[j]);
    CHECK(std::abs(tp.value[j] - shifted.value[j]) < 4 * se);
  }
}

TEST_CASE("apogee and covariance CSV layout") {
  const auto est = apogee_rate_estimate(PrecisionDistribution::constant(1.0), 3, 20.0, 2, 1);
  std::ostringstream a;
  write_apogee_csv(est, a);
  CHECK(a.str().rfind("replicate,d,T,apogee_count,rate\n", 0) == 0);
  std::ostringstream c;
  write_covariance_csv(covariance_estimate(PrecisionDistribution::constant(1.0), {0.0}, 10, 1), c);
  CHECK(c.str().rfind("lag,V_hat,se\n", 0) == 0);
}
