#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "rodsed/error.hpp"
#include "rodsed/flow.hpp"

using namespace rodsed;

namespace {

const double pi = std::numbers::pi;

double cn_sine_error(int cells, double t_end, double Re) {
  const double length = 4.0;
  StaggeredVelocity1D v(Grid1D{0.0, length, cells});
  const double k = 2 * pi / length;
  for (int i = 0; i < cells; ++i) v.w[i] = std::sin(k * v.node_x(i));
  const int steps = cells / 4;
  for (int s = 0; s < steps; ++s) cn_diffusion_step(v, t_end / steps, Re);
  double err = 0.0;
  for (int i = 0; i < cells; ++i)
    err = std::max(err, std::abs(v.w[i] - std::exp(-k * k * t_end / Re) * std::sin(k * v.node_x(i))));
  return err;
}

StaggeredVelocity2D taylor_green(int n, double length) {
  StaggeredVelocity2D v(Grid2D{0, length, n, 0, length, n});
  const double k = 2 * pi / length;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const double x = v.grid.x_center(i), z = v.grid.z_center(j);
      v.U[v.grid.index(i, j)] = std::sin(k * x) * std::cos(k * z);
      v.W[v.grid.index(i, j)] = -std::cos(k * x) * std::sin(k * z);
    }
  return v;
}

struct TgErrors {
  double velocity;
  double energy;
  double divergence;
};

TgErrors taylor_green_errors(int n, double t_end, double Re) {
  const double length = 2 * pi;
  StaggeredVelocity2D v = taylor_green(n, length);
  const StaggeredVelocity2D v0 = v;
  const double e0 = kinetic_energy(v);
  SpectralSolver2D solver(v.grid);
  const int steps = n / 2;
  double max_div = 0.0;
  for (int s = 0; s < steps; ++s) {
    navier_stokes_step_2d(v, t_end / steps, Re, solver);
    max_div = std::max(max_div, v.max_divergence());
  }
  const double amp = std::exp(-2.0 * t_end / Re);  // k = 1
  double err = 0.0;
  for (std::size_t c = 0; c < v.U.size(); ++c)
    err = std::max({err, std::abs(v.U[c] - amp * v0.U[c]), std::abs(v.W[c] - amp * v0.W[c])});
  const double energy_err = std::abs(kinetic_energy(v) / e0 - std::exp(-4.0 * t_end / Re));
  return {err, energy_err, max_div};
}

}  // namespace

TEST_CASE("cyclic tridiagonal solve agrees with a dense solve") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int n : {3, 4, 7, 32}) {
    const double a = -0.7, b = 2.3;
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    Eigen::VectorXd rhs(n);
    for (int i = 0; i < n; ++i) {
      m(i, i) = b;
      m(i, (i + 1) % n) += a;
      m(i, (i + n - 1) % n) += a;
      rhs(i) = u(rng);
    }
    const Eigen::VectorXd ref = m.lu().solve(rhs);
    std::vector<double> x(rhs.data(), rhs.data() + n);
    solve_cyclic_symmetric_tridiagonal(a, b, x);
    for (int i = 0; i < n; ++i) CHECK(x[i] == doctest::Approx(ref(i)).epsilon(1e-13));
  }
}

TEST_CASE("Crank-Nicolson diffusion") {
  StaggeredVelocity1D c(Grid1D{0, 1, 16});
  std::fill(c.w.begin(), c.w.end(), 2.5);
  cn_diffusion_step(c, 0.3, 1.0);
  for (double w : c.w) CHECK(w == doctest::Approx(2.5).epsilon(1e-14));
  CHECK_THROWS_AS(cn_diffusion_step(c, 0.0, 1.0), Error);

  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-1, 1);
  StaggeredVelocity1D r(Grid1D{0, 1, 50});
  for (double& w : r.w) w = u(rng);
  double mean = 0.0;
  for (double w : r.w) mean += w / 50;
  for (double dt : {1e-4, 1e-2, 10.0, 1e4}) {
    double before = 0.0, after = 0.0;
    for (double w : r.w) before += (w - mean) * (w - mean);
    cn_diffusion_step(r, dt, 1.0);
    double new_mean = 0.0;
    for (double w : r.w) new_mean += w / 50;
    for (double w : r.w) after += (w - mean) * (w - mean);
    CHECK(new_mean == doctest::Approx(mean).epsilon(1e-13));
    CHECK(after <= before);
  }

  // Fourier-mode decay, dt proportional to dx
  const double e1 = cn_sine_error(32, 0.5, 2.0), e2 = cn_sine_error(64, 0.5, 2.0), e3 = cn_sine_error(128, 0.5, 2.0);
  CHECK(std::log2(e1 / e2) == doctest::Approx(2.0).epsilon(0.05));
  CHECK(std::log2(e2 / e3) == doctest::Approx(2.0).epsilon(0.05));

  // two half steps versus one full step: local difference O(dt^3)
  auto local = [](double dt) {
    StaggeredVelocity1D a(Grid1D{0, 4, 16}), b(Grid1D{0, 4, 16});
    for (int i = 0; i < 16; ++i) a.w[i] = b.w[i] = std::sin(2 * pi * a.node_x(i) / 4);
    cn_diffusion_step(a, dt, 1.0);
    cn_diffusion_step(b, dt / 2, 1.0);
    cn_diffusion_step(b, dt / 2, 1.0);
    double d = 0.0;
    for (int i = 0; i < 16; ++i) d = std::max(d, std::abs(a.w[i] - b.w[i]));
    return d;
  };
  CHECK(std::log2(local(0.02) / local(0.01)) == doctest::Approx(3.0).epsilon(0.05));
}

TEST_CASE("1D buoyancy and gradient") {
  StaggeredVelocity1D v(Grid1D{0, 8, 8});
  std::vector<double> rho(8, 0.5);
  buoyancy_source_step_1d(v, rho, 0.5, 0.1, 1.0, 1.0);
  for (double w : v.w) CHECK(w == 0.0);
  rho[3] = 2.5;
  buoyancy_source_step_1d(v, rho, 0.5, 0.1, 0.0, 1.0);
  for (double w : v.w) CHECK(w == 0.0);
  buoyancy_source_step_1d(v, rho, 0.75, 0.1, 2.0, 4.0);
  for (int i = 0; i < 8; ++i) {
    const double node_rho = 0.5 * (rho[i] + rho[(i + 1) % 8]);
    CHECK(v.w[i] == doctest::Approx(0.1 * 0.5 * (0.75 - node_rho)));
  }
  // only the two nodes adjacent to cell 3 see the spike
  CHECK(v.w[2] != v.w[0]);
  CHECK(v.w[3] != v.w[0]);
  CHECK(v.w[4] == v.w[0]);

  StaggeredVelocity1D c(Grid1D{0, 1, 10});
  std::fill(c.w.begin(), c.w.end(), 3.0);
  for (double g : gradient_w_1d(c)) CHECK(g == 0.0);

  StaggeredVelocity1D s(Grid1D{0, 2 * pi, 40});
  for (int i = 0; i < 40; ++i) s.w[i] = std::sin(s.node_x(i));
  const auto g = gradient_w_1d(s);
  const double h = s.grid.dx();
  for (int i = 0; i < 40; ++i)
    CHECK(g[i] == doctest::Approx(std::cos(s.grid.center(i)) * std::sin(h / 2) / (h / 2)).epsilon(1e-12));

  StaggeredVelocity1D saw(Grid1D{0, 1, 10});
  for (int i = 0; i < 10; ++i) saw.w[i] = saw.node_x(i);
  const auto gs = gradient_w_1d(saw);
  for (int i = 1; i < 10; ++i) CHECK(gs[i] == doctest::Approx(1.0));
  CHECK(gs[0] == doctest::Approx(1.0 - 10.0));
}

TEST_CASE("2D gradients, buoyancy, projection") {
  const Grid2D g{0, 4, 8, 0, 2, 8};
  StaggeredVelocity2D v(g);
  std::fill(v.U.begin(), v.U.end(), 1.5);
  std::fill(v.W.begin(), v.W.end(), -0.5);
  for (const auto& d : gradients_2d(v)) CHECK((d.ux == 0.0 && d.uz == 0.0 && d.wx == 0.0 && d.wz == 0.0));

  StaggeredVelocity2D sh(g);
  for (int j = 0; j < g.nz; ++j)
    for (int i = 0; i < g.nx; ++i) sh.W[g.index(i, j)] = std::sin(2 * pi * g.x_center(i) / 4);
  for (const auto& d : gradients_2d(sh)) CHECK((d.ux == 0.0 && d.uz == 0.0 && d.wz == 0.0));

  std::vector<double> rho(g.cells(), 0.0);
  StaggeredVelocity2D b(g);
  buoyancy_source_step_2d(b, rho, 0.3, 1.0, 1.0);
  for (double w : b.W) CHECK(w == 0.0);
  rho[g.index(3, 4)] = 2.0;
  buoyancy_source_step_2d(b, rho, 0.3, 1.0, 2.0);
  for (int c = 0; c < g.cells(); ++c) {
    CHECK(b.U[c] == 0.0);
    CHECK(b.W[c] == (c == g.index(3, 4) ? doctest::Approx(-0.3) : doctest::Approx(0.0)));
  }

  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1, 1);
  StaggeredVelocity2D r(Grid2D{0, 3, 32, 0, 5, 16});
  for (double& x : r.U) x = u(rng);
  for (double& x : r.W) x = u(rng);
  SpectralSolver2D solver(r.grid);
  solver.project(r.U, r.W);
  CHECK(r.max_divergence() < 1e-12);
  for (const auto& d : gradients_2d(r)) CHECK(std::abs(d.ux + d.wz) < 1e-12);
  const auto copy = r;
  solver.project(r.U, r.W);
  for (std::size_t c = 0; c < r.U.size(); ++c) CHECK(r.U[c] == doctest::Approx(copy.U[c]).epsilon(1e-12));
}

TEST_CASE("Navier-Stokes trivial states") {
  const Grid2D g{0, 1, 16, 0, 1, 16};
  SpectralSolver2D solver(g);
  StaggeredVelocity2D zero(g);
  navier_stokes_step_2d(zero, 0.1, 1.0, solver);
  for (std::size_t c = 0; c < zero.U.size(); ++c) CHECK((zero.U[c] == 0.0 && zero.W[c] == 0.0));

  StaggeredVelocity2D trans(g);
  std::fill(trans.U.begin(), trans.U.end(), 0.7);
  for (int s = 0; s < 5; ++s) navier_stokes_step_2d(trans, 0.05, 1.0, solver);
  for (std::size_t c = 0; c < trans.U.size(); ++c) {
    CHECK(trans.U[c] == doctest::Approx(0.7).epsilon(1e-12));
    CHECK(std::abs(trans.W[c]) < 1e-12);
  }
}

TEST_CASE("Taylor-Green vortex decays at the viscous rate") {
  const double Re = 2.0, t = 0.5;
  const auto a = taylor_green_errors(32, t, Re);
  const auto b = taylor_green_errors(64, t, Re);
  const auto c = taylor_green_errors(128, t, Re);
  MESSAGE("TG velocity errors ", a.velocity, " ", b.velocity, " ", c.velocity);
  MESSAGE("TG energy errors ", a.energy, " ", b.energy, " ", c.energy);
  CHECK(std::log2(b.velocity / c.velocity) > 1.8);
  CHECK(std::log2(b.velocity / c.velocity) < 2.3);
  CHECK(std::log2(b.energy / c.energy) > 1.8);
  CHECK(std::log2(b.energy / c.energy) < 2.3);
  CHECK(c.divergence <= 1e-10);
}
