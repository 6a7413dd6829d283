#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "linear_exact.hpp"
#include "rodsed/error.hpp"
#include "rodsed/moment_model.hpp"
#include "rodsed/solver1d.hpp"

using namespace rodsed;

namespace {

Eigen::MatrixXd to_eigen(const DenseMatrix& m) {
  Eigen::MatrixXd out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = m(i, j);
  return out;
}

MomentField1D sine_field(int cells, int order, const Eigen::VectorXd& v, double length) {
  MomentField1D f(Grid1D{0.0, length, cells}, ResolutionMap::uniform(0.0, length, order));
  const double k = 2 * std::numbers::pi / length;
  const double dx = f.grid().dx();
  for (int i = 0; i < cells; ++i) {
    const double a = i * dx, b = a + dx;
    const double avg = (std::cos(k * a) - std::cos(k * b)) / (k * dx);
    auto q = f.cell(i);
    for (std::size_t c = 0; c < q.size(); ++c) q[c] = v(c) * avg;
  }
  return f;
}

double sine_error(int cells, int order, WaveOptions options, double t_end, bool l1 = false) {
  const double length = 10.0;
  Eigen::VectorXd v(moment_count(order));
  for (int c = 0; c < v.size(); ++c) v(c) = 1.0 / (1.0 + c);
  MomentField1D f = sine_field(cells, order, v, length);
  const oracle::LinearSineSolution exact(to_eigen(build_A_1d(order)), v, 2 * std::numbers::pi / length);
  WavePropagation1D stepper(f, options);
  const int steps = static_cast<int>(std::ceil(t_end / cfl_dt(f, 0.8)));
  const double dt = t_end / steps;
  for (int s = 0; s < steps; ++s) stepper.step(f, dt);
  double err = 0.0;
  const double dx = f.grid().dx();
  for (int i = 0; i < cells; ++i) {
    const auto ref = exact.cell_average(i * dx, (i + 1) * dx, t_end);
    for (std::size_t c = 0; c < f.cell(i).size(); ++c) {
      const double e = std::abs(f.cell(i)[c] - ref(c));
      err = l1 ? err + e * dx : std::max(err, e);
    }
  }
  return err;
}

}  // namespace

TEST_CASE("resolution maps") {
  const Grid1D g{0.0, 100.0, 100};
  const ResolutionMap map({{20, 80, 3}, {0, 20, 1}, {80, 100, 2}});
  CHECK(map.regions().front().order == 1);
  CHECK(map.min_order() == 1);
  CHECK(map.max_order() == 3);
  const auto orders = map.cell_orders(g);
  CHECK(orders[0] == 1);
  CHECK(orders[19] == 1);
  CHECK(orders[20] == 3);
  CHECK(orders[99] == 2);
  CHECK_THROWS_AS(ResolutionMap({{0, 20, 1}, {25, 100, 2}}), Error);
  CHECK_THROWS_AS(ResolutionMap({{0, 50, 1}, {40, 100, 2}}), Error);
  CHECK_THROWS_AS(ResolutionMap({{0, 100, 0}}), Error);
  CHECK_THROWS_AS(MomentField1D(g, ResolutionMap::uniform(0, 90, 1)), Error);
  CHECK_THROWS_AS(MomentField1D(Grid1D{0, 1, 3}, ResolutionMap::uniform(0, 1, 1)), Error);

  MomentField1D f(g, map);
  CHECK(f.cell(0).size() == 3);
  CHECK(f.cell(50).size() == 7);
  f.set_cell(0, std::vector<double>{1, 2, 3, 4, 5});
  CHECK(f.cell(0)[2] == 3.0);
  f.set_cell(50, std::vector<double>{1, 2, 3});
  CHECK(f.cell(50)[3] == 0.0);
}

TEST_CASE("CFL bound") {
  MomentField1D f(Grid1D{0, 8, 8}, ResolutionMap::uniform(0, 8, 1));
  CHECK(cfl_dt(f, 1.0) == doctest::Approx(2 * std::sqrt(2.0)));
  CHECK_THROWS_AS(cfl_dt(f, 0.0), Error);
  CHECK_THROWS_AS(cfl_dt(f, 1.5), Error);
  MomentField1D mixed(Grid1D{0, 8, 8}, ResolutionMap({{0, 4, 1}, {4, 8, 2}}));
  CHECK(cfl_dt(mixed, 1.0) == doctest::Approx(1.0 / moment_operator_x(2).max_abs_eigenvalue()));
  CHECK(moment_operator_x(2).max_abs_eigenvalue() > moment_operator_x(1).max_abs_eigenvalue());
  try {
    step_homogeneous(f, 3.0);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::cfl);
  }
}

TEST_CASE("constant field is a fixed point") {
  MomentField1D f(Grid1D{0, 10, 32}, ResolutionMap({{0, 3, 2}, {3, 7, 4}, {7, 10, 2}}));
  const std::vector<double> q = {1.0, 0.1, -0.2, 0.05, 0.3};
  for (int i = 0; i < f.cells(); ++i) f.set_cell(i, q);
  // the padded/truncated constant is not constant across orders, so use a
  // uniform field for the exact check and the mixed one only for finiteness
  MomentField1D u(Grid1D{0, 10, 32}, ResolutionMap::uniform(0, 10, 2));
  for (int i = 0; i < u.cells(); ++i) u.set_cell(i, q);
  const auto before = std::vector<double>(u.data().begin(), u.data().end());
  step_homogeneous(u, cfl_dt(u, 0.9));
  for (std::size_t k = 0; k < before.size(); ++k) CHECK(u.data()[k] == doctest::Approx(before[k]).epsilon(1e-15));
  step_homogeneous(f, cfl_dt(f, 0.9));
  CHECK(f.all_finite());
}

TEST_CASE("first-order step reproduces the averaged Riemann solution") {
  for (int n : {1, 3}) {
    const int cells = 16;
    MomentField1D f(Grid1D{-8, 8, cells}, ResolutionMap::uniform(-8, 8, n));
    std::mt19937_64 rng(n);
    std::uniform_real_distribution<double> u(-1, 1);
    std::vector<double> ql(moment_count(n)), qr(moment_count(n));
    for (auto& x : ql) x = u(rng);
    for (auto& x : qr) x = u(rng);
    for (int i = 0; i < cells; ++i) f.set_cell(i, f.grid().center(i) < 0 ? ql : qr);
    // zero-width periodic wrap jump would interfere; make the wrap continuous by
    // sampling only cells away from the boundary
    const double dt = cfl_dt(f, 0.9);
    step_homogeneous(f, dt, WaveOptions{.limiter = Limiter::mc, .second_order = false});

    const auto& op = moment_operator_x(n);
    const double dx = f.grid().dx();
    for (int i = 4; i < 12; ++i) {
      const double a = f.grid().x_left + i * dx, b = a + dx;
      std::vector<double> cuts = {a, b};
      for (double l : op.eigenvalues())
        if (l * dt > a && l * dt < b) cuts.push_back(l * dt);
      if (a < 0 && b > 0) cuts.push_back(0.0);
      std::sort(cuts.begin(), cuts.end());
      std::vector<double> avg(op.size(), 0.0);
      for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
        const double mid = 0.5 * (cuts[s] + cuts[s + 1]);
        const auto q = sample_generalised_rp(ql, qr, mid / dt, op, op);
        for (std::size_t c = 0; c < avg.size(); ++c) avg[c] += q[c] * (cuts[s + 1] - cuts[s]) / dx;
      }
      for (std::size_t c = 0; c < avg.size(); ++c) CHECK(f.cell(i)[c] == doctest::Approx(avg[c]).epsilon(1e-12));
    }
  }
}

TEST_CASE("conservation on periodic grids") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-1, 1);
  for (bool second : {false, true}) {
    MomentField1D f(Grid1D{0, 10, 64}, ResolutionMap({{0, 2.5, 3}, {2.5, 6, 1}, {6, 10, 5}}));
    for (double& x : f.data()) x = u(rng);
    const auto before = f.component_totals(3);
    const auto all_before = f.component_totals(11);
    WavePropagation1D stepper(f, {.limiter = Limiter::superbee, .second_order = second});
    const double dt = cfl_dt(f, 0.9);
    for (int s = 0; s < 200; ++s) stepper.step(f, dt);
    const auto after = f.component_totals(3);
    for (int c = 0; c < 3; ++c) CHECK(std::abs(after[c] - before[c]) < 1e-12 * 64);
    (void)all_before;
  }
  MomentField1D g(Grid1D{0, 10, 64}, ResolutionMap::uniform(0, 10, 4));
  for (double& x : g.data()) x = u(rng);
  const auto before = g.component_totals(9);
  WavePropagation1D stepper(g);
  for (int s = 0; s < 100; ++s) stepper.step(g, cfl_dt(g, 0.9));
  const auto after = g.component_totals(9);
  for (int c = 0; c < 9; ++c) CHECK(std::abs(after[c] - before[c]) < 1e-12 * 64);
}

TEST_CASE("scaling the data scales the step") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(-1, 1);
  MomentField1D f(Grid1D{0, 10, 40}, ResolutionMap({{0, 5, 2}, {5, 10, 3}}));
  for (double& x : f.data()) x = u(rng);
  MomentField1D g = f;
  for (double& x : g.data()) x *= 3.0;
  const double dt = cfl_dt(f, 0.9);
  step_homogeneous(f, dt);
  step_homogeneous(g, dt);
  for (std::size_t k = 0; k < f.data().size(); ++k)
    CHECK(g.data()[k] == doctest::Approx(3.0 * f.data()[k]).epsilon(1e-13));
}

TEST_CASE("orders of accuracy on smooth data") {
  for (int n : {1, 3}) {
    const double e1 = sine_error(64, n, {.limiter = Limiter::mc, .second_order = false}, 4.0);
    const double e2 = sine_error(128, n, {.limiter = Limiter::mc, .second_order = false}, 4.0);
    CHECK(std::log2(e1 / e2) == doctest::Approx(1.0).epsilon(0.15));
    // limiters clip smooth extrema, so the limited scheme is measured in L1
    const double s1 = sine_error(64, n, {}, 4.0, true);
    const double s2 = sine_error(128, n, {}, 4.0, true);
    const double s3 = sine_error(256, n, {}, 4.0, true);
    MESSAGE("MC L1 EOC ", std::log2(s1 / s2), " ", std::log2(s2 / s3));
    CHECK(std::log2(s2 / s3) > 1.7);
    CHECK(std::log2(s2 / s3) < 2.3);
    const double l1 = sine_error(64, n, {.limiter = Limiter::none}, 4.0);
    const double l2 = sine_error(128, n, {.limiter = Limiter::none}, 4.0);
    CHECK(std::log2(l1 / l2) == doctest::Approx(2.0).epsilon(0.1));
  }
}

TEST_CASE("generalised Riemann problem experiment") {
  RiemannExperiment e{.n_left = 1, .n_right = 2, .t_end = 0.0, .cells = 200};
  const auto f0 = run_generalised_rp_experiment(e);
  const auto l = steady_state_moments(1.0, 1), r = steady_state_moments(4.0, 2);
  CHECK(f0.rho(10) == l.rho());
  CHECK(f0.cell(10)[2] == l[2]);
  CHECK(f0.cell(190)[4] == r[4]);

  e.t_end = 2.0;
  const auto f = run_generalised_rp_experiment(e);
  CHECK(f.all_finite());
  CHECK(f.mean_rho() == doctest::Approx(1.0).epsilon(1e-13));
}
