#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "rodsed/error.hpp"
#include "rodsed/splitting.hpp"

using namespace rodsed;

namespace {

ShearState smooth_shear_state(int cells, int order, double length) {
  const Grid1D g{0.0, length, cells};
  MomentField1D q(g, ResolutionMap::uniform(0.0, length, order));
  for (int i = 0; i < cells; ++i) {
    // exact cell averages of 1 + 0.5 sin(2 pi x / L)
    const double a = g.x_left + i * g.dx(), b = a + g.dx(), k = 2 * std::numbers::pi / length;
    q.cell(i)[0] = 1.0 + 0.5 * (std::cos(k * a) - std::cos(k * b)) / (k * g.dx());
  }
  return ShearState(std::move(q), StaggeredVelocity1D(g));
}

std::vector<double> run_shear(int cells, double t_end, double cfl, GradientTiming timing, Limiter limiter) {
  const double length = 20.0;
  ShearState s = smooth_shear_state(cells, 3, length);
  ShearSplitting split(s, ModelParams{0.5, 1.0, 1.0}, WaveOptions{limiter, true}, timing);
  // fixed Courant number on every grid; the relaxation cap of split.cfl_dt
  // would bind on the coarsest one only
  const double dt_max = cfl_dt(s.moments, cfl);
  const int steps = static_cast<int>(std::ceil(t_end / dt_max - 1e-12));
  for (int n = 0; n < steps; ++n) split.step(s, t_end / steps);
  std::vector<double> out = s.moments.rho_profile();
  out.insert(out.end(), s.velocity.w.begin(), s.velocity.w.end());
  return out;
}

// L1 distance of the coarse cell values from averages of the fine ones. The
// second half of each vector holds face values, restricted by injection.
double restricted_l1(const std::vector<double>& coarse, const std::vector<double>& fine, double length) {
  const std::size_t nc = coarse.size() / 2, nf = fine.size() / 2, r = nf / nc;
  double err = 0.0;
  for (std::size_t i = 0; i < nc; ++i) {
    double avg = 0.0;
    for (std::size_t k = 0; k < r; ++k) avg += fine[i * r + k];
    err += std::abs(coarse[i] - avg / r);
    err += std::abs(coarse[nc + i] - fine[nf + (i + 1) * r - 1]);
  }
  return err * length / nc;
}

}  // namespace

TEST_CASE("Strang composition is palindromic and consistent") {
  const auto& s = kStrangSubsteps;
  for (std::size_t i = 0; i < s.size(); ++i) {
    CHECK(s[i].kind == s[s.size() - 1 - i].kind);
    CHECK(s[i].fraction == s[s.size() - 1 - i].fraction);
  }
  for (SubstepKind k : {SubstepKind::relax, SubstepKind::buoyancy, SubstepKind::flow, SubstepKind::hyperbolic}) {
    double total = 0.0;
    for (const Substep& sub : s)
      if (sub.kind == k) total += sub.fraction;
    CHECK(total == 1.0);
  }
}

TEST_CASE("RK4 source step has fifth-order local error") {
  const ModelParams p{0.7, 1.0, 1.0};
  const Grid1D g{0, 1, 4};
  MomentField1D q0(g, ResolutionMap::uniform(0, 1, 4));
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-0.3, 0.3);
  for (double& x : q0.data()) x = u(rng);
  for (int i = 0; i < g.cells; ++i) q0.cell(i)[0] = 1.0;
  const std::vector<double> wx = {0.3, -1.2, 2.0, 0.0};

  auto local_error = [&](double h) {
    MomentField1D a = q0, ref = q0;
    rk4_source_step(a, wx, p, h);
    for (int k = 0; k < 64; ++k) rk4_source_step(ref, wx, p, h / 64);
    double e = 0.0;
    for (std::size_t k = 0; k < a.data().size(); ++k) e = std::max(e, std::abs(a.data()[k] - ref.data()[k]));
    return e;
  };
  const double e1 = local_error(0.04), e2 = local_error(0.02);
  CHECK(std::log2(e1 / e2) == doctest::Approx(5.0).epsilon(0.06));

  // frozen gradient: agrees with a direct integration of the oracle rhs
  MomentField1D a = q0;
  const double h = 1e-6;
  rk4_source_step(a, wx, p, h);
  for (int i = 0; i < g.cells; ++i) {
    std::vector<double> c(q0.cell(i).begin(), q0.cell(i).end());
    const auto d = oracle::shear_rhs(c, wx[i], p.D_r);
    for (std::size_t k = 0; k < c.size(); ++k) CHECK((a.cell(i)[k] - c[k]) / h == doctest::Approx(d[k]).epsilon(1e-4));
  }
  CHECK_THROWS_AS(rk4_source_step(a, std::vector<double>(3, 0.0), p, 0.1), Error);
}

TEST_CASE("relaxation step limit") {
  const ModelParams p{0.01, 1.0, 1.0};
  CHECK(relax_stable_dt(20, p, 0.0) == doctest::Approx(0.25));
  CHECK(relax_stable_dt(1, p, 0.5) == doctest::Approx(4.0 / 1.04));
  CHECK(std::isinf(relax_stable_dt(3, ModelParams{0.0, 1.0, 1.0}, 0.0)));
  // RK4 on the decay rate -4 N^2 D_r of a half step at the limit stays contractive
  const double z = -4.0 * 400 * p.D_r * 0.5 * relax_stable_dt(20, p, 0.0);
  CHECK(std::abs(1 + z + z * z / 2 + z * z * z / 6 + z * z * z * z / 24) < 1.0);

  const Grid1D g{0, 10, 16};
  MomentField1D q(g, ResolutionMap({{0, 4, 2}, {4, 10, 20}}));
  for (int i = 0; i < g.cells; ++i) q.cell(i)[0] = 1.0;
  ShearState s(q, StaggeredVelocity1D(g));
  s.wx[3] = -0.7;
  ShearSplitting split(s, p);
  CHECK(split.cfl_dt(s, 0.9) == doctest::Approx(relax_stable_dt(20, p, 0.7)));
  CHECK(split.cfl_dt(s, 0.9) < cfl_dt(s.moments, 0.9));
}

TEST_CASE("uniform isotropic suspension at rest is a fixed point") {
  const Grid1D g{0, 10, 16};
  MomentField1D q(g, ResolutionMap({{0, 4, 2}, {4, 10, 5}}));
  for (int i = 0; i < g.cells; ++i) q.cell(i)[0] = 0.8;
  ShearState s(q, StaggeredVelocity1D(g));
  ShearSplitting split(s, ModelParams{0.1, 2.0, 3.0});
  for (int n = 0; n < 5; ++n) split.step(s, split.cfl_dt(s, 0.9));
  for (std::size_t k = 0; k < q.data().size(); ++k) CHECK(s.moments.data()[k] == doctest::Approx(q.data()[k]).epsilon(1e-15));
  for (double w : s.velocity.w) CHECK(std::abs(w) < 1e-15);
  CHECK(s.time == doctest::Approx(5 * split.cfl_dt(s, 0.9)));
}

TEST_CASE("shear splitting conserves mass and mean velocity") {
  ShearState s = smooth_shear_state(64, 4, 20.0);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-0.1, 0.1);
  for (double& w : s.velocity.w) w = u(rng);
  const double mass = s.moments.mean_rho();
  const double mean_w = std::accumulate(s.velocity.w.begin(), s.velocity.w.end(), 0.0) / 64;
  CHECK(s.rho_bar == doctest::Approx(mass));
  ShearSplitting split(s, ModelParams{0.05, 0.2, 1.0});
  for (int n = 0; n < 40; ++n) split.step(s, split.cfl_dt(s, 0.9));
  CHECK(s.moments.mean_rho() == doctest::Approx(mass).epsilon(1e-14));
  CHECK(std::accumulate(s.velocity.w.begin(), s.velocity.w.end(), 0.0) / 64 == doctest::Approx(mean_w).epsilon(1e-12));
  CHECK(s.moments.all_finite());
  // something happened: the sedimenting bump has generated a shear flow
  CHECK(*std::max_element(s.velocity.w.begin(), s.velocity.w.end()) > 0.1 + 1e-3);
}

TEST_CASE("shear splitting converges at second order") {
  const double t_end = 2.0, cfl = 0.5;
  for (GradientTiming timing : {GradientTiming::current, GradientTiming::latest_computed}) {
    const auto ref = run_shear(1024, t_end, cfl, timing, Limiter::none);
    std::vector<double> errs;
    for (int n : {64, 128, 256}) errs.push_back(restricted_l1(run_shear(n, t_end, cfl, timing, Limiter::none), ref, 20.0));
    const double eoc1 = std::log2(errs[0] / errs[1]), eoc2 = std::log2(errs[1] / errs[2]);
    MESSAGE("timing " << static_cast<int>(timing) << " errors " << errs[0] << " " << errs[1] << " " << errs[2]
                      << " eoc " << eoc1 << " " << eoc2);
    // A gradient computed before the last buoyancy quarter step lags by O(dt)
    // in both relaxation substeps, which costs the second order.
    if (timing == GradientTiming::current) {
      CHECK(eoc1 > 1.8);
      CHECK(eoc2 > 1.8);
    } else {
      CHECK(eoc2 < 1.7);
    }
  }
}

TEST_CASE("2D splitting conserves mass and keeps the flow solenoidal") {
  const Grid2D g{0, 20, 32, 0, 20, 32};
  MomentField2D q(g, 3);
  for (int j = 0; j < g.nz; ++j)
    for (int i = 0; i < g.nx; ++i) {
      const double x = g.x_center(i) - 10, z = g.z_center(j) - 12;
      q.cell(i, j)[0] = std::exp(-0.1 * (x * x + z * z));
    }
  TwoDimState s(q, StaggeredVelocity2D(g));
  TwoDimSplitting split(s, ModelParams{0.5, 1.0, 1.0});
  const double mass = std::accumulate(q.data().begin(), q.data().end(), 0.0, [&, k = std::size_t{0}](double a, double v) mutable {
    return (k++ % q.moments() == 0) ? a + v : a;
  });
  for (int n = 0; n < 10; ++n) split.step(s, 0.5 * split.cfl_dt(s, 0.9));
  const auto rho = s.moments.rho_field();
  CHECK(std::accumulate(rho.begin(), rho.end(), 0.0) == doctest::Approx(mass).epsilon(1e-13));
  CHECK(s.moments.all_finite());
  // the bump sinks: net downward momentum beneath it
  double wsum = 0.0;
  for (int c = 0; c < g.cells(); ++c) wsum += rho[c] * s.velocity.W[c];
  CHECK(wsum < 0.0);

  const TwoDimState before = s;
  CHECK_THROWS_AS(split.step(s, 100.0), Error);
  CHECK(s.time == before.time);
  CHECK(std::equal(s.moments.data().begin(), s.moments.data().end(), before.moments.data().begin()));
  CHECK(s.velocity.W == before.velocity.W);
}
