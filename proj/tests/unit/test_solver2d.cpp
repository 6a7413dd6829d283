#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "rodsed/error.hpp"
#include "rodsed/solver2d.hpp"

using namespace rodsed;

TEST_CASE("2D CFL bound") {
  const Grid2D g{0, 4, 4, 0, 4, 4};
  MomentField2D f(g, 1);
  StaggeredVelocity2D v(g);
  const double l = 1.0 / (2.0 * std::sqrt(2.0));
  CHECK(cfl_dt_2d(f, v, 0.9) == doctest::Approx(0.9 / (l + 1.5 + l)));
  // the z operator of order 1 has the same spread as the x operator
  CHECK(moment_operator_z(1).max_abs_eigenvalue() == doctest::Approx(l));

  const Grid2D g2{0, 8, 4, 0, 8, 4};
  MomentField2D f2(g2, 1);
  StaggeredVelocity2D v2(g2);
  CHECK(cfl_dt_2d(f2, v2, 0.9) == doctest::Approx(2 * cfl_dt_2d(f, v, 0.9)));
  std::fill(v.U.begin(), v.U.end(), 1.0);
  CHECK(cfl_dt_2d(f, v, 0.9) < cfl_dt_2d(f2, v2, 0.9) / 2);
  CHECK_THROWS_AS(cfl_dt_2d(f, v, 0.0), Error);
  CHECK_THROWS_AS(step_homogeneous_2d(f, v, 10.0), Error);
}

TEST_CASE("constant data with constant velocity is a fixed point") {
  const Grid2D g{0, 1, 8, 0, 2, 8};
  MomentField2D f(g, 3);
  StaggeredVelocity2D v(g);
  std::fill(v.U.begin(), v.U.end(), 0.4);
  std::fill(v.W.begin(), v.W.end(), -0.2);
  const std::vector<double> q = {1.0, 0.2, -0.1, 0.05, 0.0, 0.3, -0.4};
  for (int c = 0; c < g.cells(); ++c) std::copy(q.begin(), q.end(), f.cell(c).begin());
  step_homogeneous_2d(f, v, cfl_dt_2d(f, v, 0.9));
  for (int c = 0; c < g.cells(); ++c)
    for (std::size_t k = 0; k < q.size(); ++k) CHECK(f.cell(c)[k] == doctest::Approx(q[k]).epsilon(1e-14));
}

TEST_CASE("x-only data at rest reproduces the 1D solver") {
  const int nx = 32, nz = 6;
  const Grid2D g{0, 10, nx, 0, 3, nz};
  for (int order : {1, 4}) {
    MomentField2D f(g, order);
    MomentField1D line(Grid1D{0, 10, nx}, ResolutionMap::uniform(0, 10, order));
    std::mt19937_64 rng(order);
    std::uniform_real_distribution<double> u(-1, 1);
    for (int i = 0; i < nx; ++i) {
      auto q = line.cell(i);
      for (double& x : q) x = u(rng);
      for (int j = 0; j < nz; ++j) std::copy(q.begin(), q.end(), f.cell(i, j).begin());
    }
    // W = 3/2 removes the constant z-shift so that the z-sweep sees no jump and no speed offset
    StaggeredVelocity2D v(g);
    std::fill(v.W.begin(), v.W.end(), 1.5);
    const double dt = cfl_dt_2d(f, v, 0.9);
    WavePropagation2D s2(g, order);
    WavePropagation1D s1(line);
    for (int s = 0; s < 10; ++s) {
      s2.step(f, v, dt);
      s1.step(line, dt);
    }
    for (int i = 0; i < nx; ++i)
      for (int j = 0; j < nz; ++j)
        for (std::size_t k = 0; k < f.moments(); ++k) CHECK(f.cell(i, j)[k] == doctest::Approx(line.cell(i)[k]).epsilon(1e-13));
  }
}

TEST_CASE("conservation with a solenoidal velocity") {
  const Grid2D g{0, 10, 24, 0, 8, 20};
  MomentField2D f(g, 3);
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-1, 1);
  for (double& x : f.data()) x = u(rng);
  StaggeredVelocity2D v(g);
  for (double& x : v.U) x = 0.5 * u(rng);
  for (double& x : v.W) x = 0.5 * u(rng);
  SpectralSolver2D solver(g);
  solver.project(v.U, v.W);
  const auto before = f.component_totals();
  WavePropagation2D stepper(g, 3);
  const double dt = cfl_dt_2d(f, v, 0.9);
  for (int s = 0; s < 50; ++s) stepper.step(f, v, dt);
  const auto after = f.component_totals();
  for (std::size_t k = 0; k < before.size(); ++k) CHECK(std::abs(after[k] - before[k]) < 1e-12 * g.cells());
}

TEST_CASE("density-only Gaussian at rest keeps its mass and mirror symmetry") {
  const int n = 32;
  const Grid2D g{0, 10, n, 0, 10, n};
  MomentField2D f(g, 2);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const double x = g.x_center(i) - 5, z = g.z_center(j) - 6;
      f.cell(i, j)[0] = std::exp(-0.5 * (x * x + z * z));
    }
  StaggeredVelocity2D v(g);
  const double mass = f.component_totals()[0];
  WavePropagation2D stepper(g, 2);
  const double dt = cfl_dt_2d(f, v, 0.9);
  for (int s = 0; s < 40; ++s) stepper.step(f, v, dt);
  CHECK(std::abs(f.component_totals()[0] - mass) < 1e-12 * mass);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n / 2; ++i)
      CHECK(f.cell(i, j)[0] == doctest::Approx(f.cell(n - 1 - i, j)[0]).epsilon(1e-12));
}
