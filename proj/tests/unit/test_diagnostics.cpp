#include <doctest.h>

#include <cmath>
#include <sstream>

#include "aaps/aaps.hpp"
#include "aaps/chain.hpp"
#include "aaps/diagnostics.hpp"

using namespace aaps;

namespace {

std::vector<double> ar1(double rho, std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> x(n);
  x[0] = rng.normal() / std::sqrt(1 - rho * rho);
  for (std::size_t i = 1; i < n; ++i) x[i] = rho * x[i - 1] + rng.normal();
  return x;
}

}  // namespace

TEST_CASE("ESS of independent draws") {
  const auto x = ar1(0.0, 10000, 1);
  const double r = ess(x) / 10000.0;
  CHECK(r > 0.9);
  CHECK(r < 1.1);
}

TEST_CASE("ESS of an AR(1) sequence") {
  const auto x = ar1(0.9, 100000, 2);
  const double r = ess(x) / 100000.0;
  CHECK(std::abs(r / (1.0 / 19.0) - 1.0) < 0.25);
  const double bm = ess_batch_means(x) / 100000.0;
  CHECK(std::abs(bm / (1.0 / 19.0) - 1.0) < 0.35);
}

TEST_CASE("ESS of an antithetic sequence exceeds n") {
  std::vector<double> x(1000);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = i % 2 ? 1.0 : -1.0;
  const double e = ess(x);
  CHECK(std::isfinite(e));
  CHECK(e > 1000.0);
}

TEST_CASE("ESS is invariant to shift and scale") {
  auto x = ar1(0.5, 5000, 3);
  const double e = ess(x);
  for (double& v : x) v = 3.0 * v - 7.0;
  CHECK(ess(x) == doctest::Approx(e).epsilon(1e-9));
}

TEST_CASE("ESS degenerate inputs") {
  CHECK(ess(std::vector<double>(100, 2.5)) == 0.0);
  CHECK(ess(std::vector<double>{1.0}) == 0.0);
}

TEST_CASE("efficiency") {
  const std::vector<double> e = {100.0, 200.0};
  CHECK(efficiency(e, 1000) == doctest::Approx(0.1).epsilon(1e-15));
  CHECK(efficiency(e, 2000) == doctest::Approx(0.05).epsilon(1e-15));
  ChainStats s;
  s.ess = {300.0, 50.0, 80.0};
  s.leapfrog_steps = 500;
  CHECK(s.min_ess() == 50.0);
  CHECK(s.min_ess_component() == 1);
  CHECK(efficiency(s) == doctest::Approx(0.1));
  // Relative efficiency is a plain quotient.
  CHECK(efficiency(e, 1000) / efficiency(e, 4000) == doctest::Approx(4.0));
}

TEST_CASE("segment probabilities") {
  CHECK(segment_probability(2, 0) == doctest::Approx(1.0 / 3).epsilon(1e-15));
  CHECK(segment_probability(2, 1) == doctest::Approx(4.0 / 9).epsilon(1e-15));
  CHECK(segment_probability(2, 2) == doctest::Approx(2.0 / 9).epsilon(1e-15));
  for (int K : {0, 1, 5, 60, 200}) {
    double s = 0.0;
    for (int k = 0; k <= K; ++k) s += segment_probability(K, k);
    CHECK(std::abs(s - 1.0) < 1e-12);
  }
}

TEST_CASE("K diagnostic") {
  SUBCASE("null histogram") {
    const int K = 6;
    std::vector<double> n;
    for (int k = 0; k <= K; ++k) n.push_back(5040.0 * segment_probability(K, k));
    const KDiagnostic d = k_diagnostic(n, K);
    for (double m : d.m) CHECK(m == doctest::Approx(d.m[0]).epsilon(1e-12));
    CHECK(d.K_hat == 0);
    for (double mb : d.m_bar) CHECK(mb == doctest::Approx(100.0).epsilon(1e-12));
  }
  SUBCASE("peak") {
    const std::vector<std::uint64_t> n = {10, 30, 40, 12, 3};
    const KDiagnostic d = k_diagnostic(std::span<const std::uint64_t>(n), 4);
    double sum = 0.0;
    for (double v : d.m_bar) sum += v;
    CHECK(sum == doctest::Approx(500.0).epsilon(1e-12));
    std::size_t arg = 0;
    for (std::size_t k = 1; k < d.m.size(); ++k) {
      if (d.m[k] > d.m[arg]) arg = k;
    }
    CHECK(d.K_hat == static_cast<int>(arg));
    CHECK(d.total == 95.0);
    std::ostringstream out;
    write_kdiag_csv(d, out);
    std::istringstream in(out.str());
    std::string l1, l2;
    std::getline(in, l1);
    std::getline(in, l2);
    CHECK(l1 == "# K_hat=" + std::to_string(d.K_hat) + ",K_star=4,N=95");
    CHECK(l2 == "k,n,p,m,m_bar");
  }
  CHECK_THROWS_AS(k_diagnostic(std::vector<double>{1.0}, 0), std::invalid_argument);
  CHECK_THROWS_AS(k_diagnostic(std::vector<double>{1.0, 2.0}, 2), std::invalid_argument);
  CHECK_THROWS_AS(k_diagnostic(std::vector<double>{0.0, 0.0}, 1), std::invalid_argument);
}

TEST_CASE("chain runner bookkeeping") {
  const auto t = std::make_shared<ProductTarget>(ComponentFamily::Gaussian, std::vector<double>{1.0, 2.0});
  AapsConfig c;
  c.K = 3;
  c.eps = 0.7;
  AapsKernel k(t, c);

  SUBCASE("burn-in is kept apart") {
    Rng rng(1);
    ChainOptions o;
    o.iterations = 100;
    o.burn_in = 50;
    o.thin = 3;
    o.histogram_bins = 4;
    std::uint64_t seen = 0, steps = 0;
    o.observer = [&](std::uint64_t, const Eigen::VectorXd&, const IterationStats& s) {
      ++seen;
      steps += s.leapfrog_steps;
    };
    const ChainOutput out = run_chain(k, Eigen::VectorXd::Zero(2), o, rng);
    CHECK(seen == 100);
    CHECK(out.stats.leapfrog_steps == steps);
    CHECK(out.burn_in_leapfrog_steps > 0);
    CHECK(out.samples.rows() == 33);
    std::uint64_t h = 0;
    for (auto v : out.stats.segment_histogram) h += v;
    CHECK(h == 100);
    CHECK(out.stats.ess.size() == 2);
  }
  SUBCASE("zero iterations") {
    Rng rng(1);
    ChainOptions o;
    o.iterations = 0;
    const ChainOutput out = run_chain(k, Eigen::VectorXd::Zero(2), o, rng);
    CHECK(out.samples.rows() == 0);
    CHECK(out.stats.acceptance_rate == 0.0);
    CHECK(out.stats.ess.empty());
  }
  SUBCASE("bad input") {
    Rng rng(1);
    ChainOptions o;
    o.thin = 0;
    CHECK_THROWS(run_chain(k, Eigen::VectorXd::Zero(2), o, rng));
    o.thin = 1;
    CHECK_THROWS(run_chain(k, Eigen::VectorXd::Constant(2, NAN), o, rng));
  }
}
