#include <doctest.h>

#include <cmath>
#include <numbers>

#include "aaps/dynamics.hpp"
#include "aaps/gp_limit.hpp"
#include "aaps/targets.hpp"

using namespace aaps;
using Eigen::VectorXd;

namespace {

PhaseState state1d(const TargetDensity& t, double x, double p) {
  VectorXd xv(1), pv(1);
  xv[0] = x;
  pv[0] = p;
  return make_phase_state(xv, pv, MassMatrix::identity(1), t);
}

PhaseState random_state(const TargetDensity& t, const MassMatrix& m, Rng& rng) {
  return make_phase_state(t.initial_point(rng), m.sample_momentum(rng), m, t);
}

double rel_diff(const VectorXd& a, const VectorXd& b) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    worst = std::max(worst, std::abs(a[i] - b[i]) / std::max(1.0, std::abs(b[i])));
  }
  return worst;
}

}  // namespace

TEST_CASE("one leapfrog step on the standard normal") {
  ProductTarget t(ComponentFamily::Gaussian, {1.0});
  WorkCounter w;
  const PhaseState z1 = leapfrog_step(state1d(t, 1.0, 0.0), 0.1, MassMatrix::identity(1), t, w);
  CHECK(z1.x[0] == doctest::Approx(0.995).epsilon(1e-14));
  CHECK(z1.p[0] == doctest::Approx(-0.09975).epsilon(1e-14));
  CHECK(w.leapfrog_steps == 1);
  CHECK(z1.hamiltonian() == doctest::Approx(0.5 * 0.995 * 0.995 + 0.5 * 0.09975 * 0.09975));
}

TEST_CASE("cached energies match recomputation") {
  Rng rng(3);
  const auto t = make_modified_rosenbrock(6);
  VectorXd diag(6);
  diag << 1, 2, 0.5, 3, 1, 1;
  const MassMatrix m(diag);
  PhaseState z = random_state(*t, m, rng);
  WorkCounter w;
  for (int i = 0; i < 20; ++i) {
    leapfrog_step(z, z, 0.05, m, *t, w);
    CHECK(z.x.size() == 6);
    CHECK(z.p.size() == 6);
    CHECK(z.grad.size() == 6);
    const double h = t->potential(z.x) + 0.5 * z.p.cwiseProduct(diag.cwiseInverse()).dot(z.p);
    CHECK(std::abs(z.hamiltonian() - h) < 1e-12 * std::max(1.0, std::abs(h)));
  }
}

TEST_CASE("skew reversibility") {
  Rng rng(5);
  const auto t = make_modified_rosenbrock(4);
  const MassMatrix m = MassMatrix::identity(4);
  const PhaseState z0 = random_state(*t, m, rng);
  WorkCounter w;
  PhaseState z = leapfrog_step(z0, 0.1, m, *t, w);
  flip_momentum(z);
  z = leapfrog_step(z, 0.1, m, *t, w);
  flip_momentum(z);
  CHECK((z.x - z0.x).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((z.p - z0.p).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("leapfrog map preserves volume") {
  ProductTarget t(ComponentFamily::Gaussian, {1.0, 3.0});
  const MassMatrix m = MassMatrix::identity(2);
  VectorXd s(4);
  s << 0.4, -1.2, 0.7, 0.3;
  auto map = [&](const VectorXd& v) {
    WorkCounter w;
    const PhaseState z = leapfrog_step(make_phase_state(v.head(2), v.tail(2), m, t), 0.3, m, t, w);
    VectorXd out(4);
    out << z.x, z.p;
    return out;
  };
  Eigen::Matrix4d J;
  const double h = 1e-6;
  for (int j = 0; j < 4; ++j) {
    VectorXd a = s, b = s;
    a[j] += h;
    b[j] -= h;
    J.col(j) = (map(a) - map(b)) / (2 * h);
  }
  CHECK(std::abs(J.determinant() - 1.0) < 1e-6);
}

TEST_CASE("apogee crossing sign checks") {
  ProductTarget t(ComponentFamily::Gaussian, {1.0});
  const MassMatrix m = MassMatrix::identity(1);
  CHECK(is_apogee_crossing(state1d(t, 1, 1), state1d(t, 1.05, -0.2), m));
  CHECK(is_apogee_crossing(state1d(t, 1, 1), state1d(t, 1.05, -0.2)));
  CHECK_FALSE(is_apogee_crossing(state1d(t, 1, -1), state1d(t, 0.9, -1), m));
  CHECK_FALSE(is_apogee_crossing(state1d(t, 1, 0), state1d(t, 1, -1), m));
}

TEST_CASE("crossing count along a long path matches a dense reference") {
  // U = x1^2/2 + x2^2/8; the exact flow is harmonic per coordinate.
  ProductTarget t(ComponentFamily::Gaussian, {1.0, 2.0});
  const MassMatrix m = MassMatrix::identity(2);
  VectorXd x0(2), p0(2);
  x0 << 0.8, -1.1;
  p0 << 0.5, 0.9;
  const double eps = 0.01;
  const int n = 20000;
  PhaseState z = make_phase_state(x0, p0, m, t);
  WorkCounter w;
  int leap = 0;
  for (int i = 0; i < n; ++i) {
    const PhaseState next = leapfrog_step(z, eps, m, t, w);
    if (is_apogee_crossing(z, next, m)) ++leap;
    z = next;
  }
  // Dense exact trajectory, 10 points per leapfrog step.
  const double T = eps * n;
  const int dense = 10 * n;
  const double omega[2] = {1.0, 0.5};
  auto du = [&](double s) {
    double v = 0.0;
    for (int i = 0; i < 2; ++i) {
      const double xi = x0[i] * std::cos(omega[i] * s) + p0[i] / omega[i] * std::sin(omega[i] * s);
      const double pi = -x0[i] * omega[i] * std::sin(omega[i] * s) + p0[i] * std::cos(omega[i] * s);
      v += omega[i] * omega[i] * xi * pi;
    }
    return v;
  };
  int exact = 0;
  double prev = du(0.0);
  for (int k = 1; k <= dense; ++k) {
    const double cur = du(T * k / dense);
    if (prev > 0 && cur < 0) ++exact;
    prev = cur;
  }
  CHECK(exact > 20);
  CHECK(std::abs(leap - exact) <= 1);
}

TEST_CASE("single segment path") {
  Rng rng(8);
  const auto t = make_modified_rosenbrock(4);
  const MassMatrix m = MassMatrix::identity(4);
  const PhaseState z0 = random_state(*t, m, rng);
  WorkCounter w;
  const SegmentPath path = build_segment_range(z0, 0, 0, 0.05, m, *t, PathOptions{}, w);
  REQUIRE(path.stable());
  CHECK(path.points[path.origin].step == 0);
  CHECK(path.points[path.origin].state.x == z0.x);
  for (const auto& e : path.points) CHECK(e.segment == 0);
  CHECK(path.crossings() == 0);
  CHECK(w.leapfrog_steps == path.summary.leapfrog_steps);
  CHECK(path.summary.leapfrog_steps == path.size() + 1);
}

TEST_CASE("segment ranges: ordering, crossings and stability flag") {
  Rng rng(9);
  ScaleProgression prog;
  prog.dimension = 10;
  prog.xi = 10;
  const auto t = make_product_target(ComponentFamily::SkewGaussian, prog);
  const MassMatrix m = MassMatrix::identity(10);
  for (int rep = 0; rep < 30; ++rep) {
    const int a = -rng.uniform_int(0, 3);
    const int b = rng.uniform_int(0, 3);
    const PhaseState z0 = random_state(*t, m, rng);
    WorkCounter w;
    PathOptions opt;
    opt.delta = rep % 2 ? 1000.0 : 0.5;
    const SegmentPath p = build_segment_range(z0, a, b, 0.4, m, *t, opt, w);
    double lo = 1e300, hi = -1e300;
    for (std::size_t i = 0; i < p.size(); ++i) {
      lo = std::min(lo, p.points[i].state.hamiltonian());
      hi = std::max(hi, p.points[i].state.hamiltonian());
      if (i) {
        CHECK(p.points[i].segment >= p.points[i - 1].segment);
        CHECK(p.points[i].step == p.points[i - 1].step + 1);
      }
    }
    if (p.stable()) {
      CHECK(p.crossings() == b - a);
      CHECK(p.points.front().segment == a);
      CHECK(p.points.back().segment == b);
      CHECK(hi - lo < opt.delta);
    } else {
      CHECK(hi - lo >= opt.delta);
    }
  }
}

TEST_CASE("zero threshold flags every path") {
  Rng rng(10);
  ProductTarget t(ComponentFamily::Gaussian, {1.0, 2.0, 3.0});
  const MassMatrix m = MassMatrix::identity(3);
  PathOptions opt;
  opt.delta = 0.0;
  for (int rep = 0; rep < 20; ++rep) {
    WorkCounter w;
    CHECK_FALSE(build_segment_range(random_state(t, m, rng), -1, 1, 0.2, m, t, opt, w).stable());
  }
}

TEST_CASE("segment invariance") {
  Rng rng(12);
  ScaleProgression prog;
  prog.dimension = 8;
  prog.xi = 5;
  std::vector<TargetPtr> targets = {make_product_target(ComponentFamily::Logistic, prog),
                                    make_modified_rosenbrock(4)};
  for (const auto& t : targets) {
    const MassMatrix m = MassMatrix::identity(t->dimension());
    for (int rep = 0; rep < 10; ++rep) {
      const PhaseState z0 = random_state(*t, m, rng);
      const int a = -2, b = 2;
      WorkCounter w;
      const SegmentPath p = build_segment_range(z0, a, b, 0.05, m, *t, PathOptions{}, w);
      REQUIRE(p.stable());
      // Rebuild from a point in another segment.
      const std::size_t j = static_cast<std::size_t>(rng.uniform_int(0, static_cast<int>(p.size()) - 1));
      const int s = p.points[j].segment;
      const SegmentPath q = build_segment_range(p.points[j].state, a - s, b - s, 0.05, m, *t,
                                                PathOptions{}, w);
      REQUIRE(q.stable());
      REQUIRE(q.size() == p.size());
      const long shift = p.points[j].step;
      for (std::size_t i = 0; i < p.size(); ++i) {
        CHECK(q.points[i].step + shift == p.points[i].step);
        CHECK(q.points[i].segment + s == p.points[i].segment);
        CHECK(rel_diff(q.points[i].state.x, p.points[i].state.x) < 1e-8);
        CHECK(rel_diff(q.points[i].state.p, p.points[i].state.p) < 1e-8);
      }
    }
  }
}

TEST_CASE("streaming traversal matches the stored path") {
  Rng rng(13);
  ScaleProgression prog;
  prog.dimension = 6;
  prog.xi = 8;
  const auto t = make_product_target(ComponentFamily::SkewGaussian, prog);
  const MassMatrix m = MassMatrix::identity(6);
  for (int rep = 0; rep < 100; ++rep) {
    const PhaseState z0 = random_state(*t, m, rng);
    const int a = -rng.uniform_int(0, 2), b = rng.uniform_int(0, 2);
    WorkCounter w1, w2;
    const SegmentPath p = build_segment_range(z0, a, b, 0.3, m, *t, PathOptions{}, w1);
    std::vector<std::pair<long, VectorXd>> seen;
    std::size_t count = 0;
    const PathSummary s = stream_segment_range(z0, a, b, 0.3, m, *t, PathOptions{}, w2,
                                               [&](const PathPoint& pt) {
                                                 ++count;
                                                 if (rep < 10) seen.emplace_back(pt.step, pt.state.x);
                                               });
    CHECK(count == p.size());
    CHECK(s.points() == p.size());
    CHECK(s.stable == p.stable());
    CHECK(w1.leapfrog_steps == w2.leapfrog_steps);
    for (const auto& [step, x] : seen) {
      const auto& e = p.points[static_cast<std::size_t>(step - p.points.front().step)];
      CHECK(e.step == step);
      CHECK(e.state.x == x);
    }
  }
}

TEST_CASE("streaming retains a fixed number of states") {
  ProductTarget t(ComponentFamily::Gaussian, {1.0, 1.5});
  const MassMatrix m = MassMatrix::identity(2);
  Rng rng(14);
  const PhaseState z0 = random_state(t, m, rng);
  for (int K : {1, 10, 100}) {
    WorkCounter w;
    const PathSummary s = stream_segment_range(z0, 0, K, 0.1, m, t, PathOptions{}, w,
                                               [](const PathPoint&) {});
    CHECK(s.stable);
    CHECK(s.retained_states == 3);
  }
}

TEST_CASE("energy error stays bounded along a path") {
  ProductTarget t(ComponentFamily::Gaussian, {1.0, 2.0, 4.0});
  const MassMatrix m = MassMatrix::identity(3);
  Rng rng(15);
  PhaseState z = random_state(t, m, rng);
  const double h0 = z.hamiltonian();
  WorkCounter w;
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    leapfrog_step(z, z, 0.1, m, t, w);
    worst = std::max(worst, std::abs(z.hamiltonian() - h0));
  }
  // Leapfrog energy error is O(eps^2) uniformly in time for harmonic flows.
  CHECK(worst < 0.01 * std::max(1.0, h0));
}

TEST_CASE("apogee rate of a unit harmonic oscillator") {
  ProductTarget t(ComponentFamily::Gaussian, {1.0});
  VectorXd x0(1), p0(1);
  x0[0] = 0.3;
  p0[0] = 1.1;
  const std::size_t steps = 1000000;
  const DotProductTrace tr = leapfrog_trace(t, x0, p0, 0.01, steps);
  const double rate = tr.apogees / (0.01 * steps);
  CHECK(std::abs(rate * std::numbers::pi - 1.0) < 0.02);
  const DotProductTrace ex = exact_gaussian_trace({1.0}, x0, p0, 0.01, steps);
  CHECK(std::abs(ex.apogees / (0.01 * steps) * std::numbers::pi - 1.0) < 0.02);
}
