#include "rodsed/flow.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <string>

#include "rodsed/error.hpp"

namespace rodsed {

namespace {

// Thomas algorithm for a tridiagonal system with constant off-diagonal a and
// diagonal diag (modified copies passed in).
void thomas(double a, std::vector<double>& diag, std::span<double> x) {
  const std::size_t n = x.size();
  for (std::size_t i = 1; i < n; ++i) {
    const double m = a / diag[i - 1];
    diag[i] -= m * a;
    x[i] -= m * x[i - 1];
  }
  x[n - 1] /= diag[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) x[i] = (x[i] - a * x[i + 1]) / diag[i];
}

// FFTW planning is not thread-safe.
std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

void solve_cyclic_symmetric_tridiagonal(double a, double b, std::span<double> rhs) {
  const std::size_t n = rhs.size();
  if (n < 3) throw Error(ErrorKind::dimension, "cyclic system needs at least 3 unknowns");
  if (a == 0.0) {
    for (double& x : rhs) x /= b;
    return;
  }
  const double gamma = -b;
  std::vector<double> diag(n, b);
  diag[0] = b - gamma;
  diag[n - 1] = b - a * a / gamma;
  std::vector<double> d1 = diag;
  thomas(a, d1, rhs);

  std::vector<double> z(n, 0.0);
  z[0] = gamma;
  z[n - 1] = a;
  thomas(a, diag, z);

  const double denom = 1.0 + z[0] + a * z[n - 1] / gamma;
  if (denom == 0.0 || !std::isfinite(denom)) throw Error(ErrorKind::solver, "singular cyclic tridiagonal system");
  const double factor = (rhs[0] + a * rhs[n - 1] / gamma) / denom;
  for (std::size_t i = 0; i < n; ++i) rhs[i] -= factor * z[i];
}

void cn_diffusion_step(StaggeredVelocity1D& vel, double dt, double Re) {
  if (!(dt > 0.0)) throw Error(ErrorKind::contract, "diffusion step needs dt > 0");
  if (!(Re > 0.0)) throw Error(ErrorKind::config, "Re must be > 0");
  const int m = vel.grid.cells;
  const double r = dt / (2.0 * Re * vel.grid.dx() * vel.grid.dx());
  std::vector<double> rhs(m);
  for (int i = 0; i < m; ++i) {
    const double wl = vel.w[(i + m - 1) % m], wr = vel.w[(i + 1) % m];
    rhs[i] = vel.w[i] + r * (wl - 2.0 * vel.w[i] + wr);
  }
  solve_cyclic_symmetric_tridiagonal(-r, 1.0 + 2.0 * r, rhs);
  // The operator maps constants to themselves; restore the mean against
  // roundoff, which grows with r through the Sherman-Morrison correction.
  double drift = 0.0;
  for (int i = 0; i < m; ++i) drift += rhs[i] - vel.w[i];
  drift /= m;
  for (int i = 0; i < m; ++i) vel.w[i] = rhs[i] - drift;
}

void buoyancy_source_step_1d(StaggeredVelocity1D& vel, std::span<const double> rho_cells, double rho_bar, double dt,
                             double delta, double Re) {
  const int m = vel.grid.cells;
  if (static_cast<int>(rho_cells.size()) != m) throw Error(ErrorKind::dimension, "density and velocity grids differ");
  const double k = dt * delta / Re;
  for (int i = 0; i < m; ++i) vel.w[i] += k * (rho_bar - 0.5 * (rho_cells[i] + rho_cells[(i + 1) % m]));
}

std::vector<double> gradient_w_1d(const StaggeredVelocity1D& vel) {
  const int m = vel.grid.cells;
  const double dx = vel.grid.dx();
  std::vector<double> wx(m);
  for (int i = 0; i < m; ++i) wx[i] = (vel.w[i] - vel.w[(i + m - 1) % m]) / dx;
  return wx;
}

double StaggeredVelocity2D::u_east(int i, int j) const {
  return 0.5 * (U[grid.index(i, j)] + U[grid.index((i + 1) % grid.nx, j)]);
}
double StaggeredVelocity2D::u_north(int i, int j) const {
  return 0.5 * (U[grid.index(i, j)] + U[grid.index(i, (j + 1) % grid.nz)]);
}
double StaggeredVelocity2D::w_east(int i, int j) const {
  return 0.5 * (W[grid.index(i, j)] + W[grid.index((i + 1) % grid.nx, j)]);
}
double StaggeredVelocity2D::w_north(int i, int j) const {
  return 0.5 * (W[grid.index(i, j)] + W[grid.index(i, (j + 1) % grid.nz)]);
}

double StaggeredVelocity2D::divergence(int i, int j) const {
  const int il = (i + grid.nx - 1) % grid.nx, jl = (j + grid.nz - 1) % grid.nz;
  return (u_east(i, j) - u_east(il, j)) / grid.dx() + (w_north(i, j) - w_north(i, jl)) / grid.dz();
}

double StaggeredVelocity2D::max_divergence() const {
  double m = 0.0;
  for (int j = 0; j < grid.nz; ++j)
    for (int i = 0; i < grid.nx; ++i) m = std::max(m, std::abs(divergence(i, j)));
  return m;
}

void buoyancy_source_step_2d(StaggeredVelocity2D& vel, std::span<const double> rho_cells, double dt, double delta,
                             double Re) {
  if (rho_cells.size() != vel.W.size()) throw Error(ErrorKind::dimension, "density and velocity grids differ");
  const double k = dt * delta / Re;
  for (std::size_t c = 0; c < vel.W.size(); ++c) vel.W[c] -= k * rho_cells[c];
}

std::vector<VelocityGradient2D> gradients_2d(const StaggeredVelocity2D& vel) {
  const Grid2D& g = vel.grid;
  std::vector<VelocityGradient2D> out(g.cells());
  for (int j = 0; j < g.nz; ++j) {
    const int jl = (j + g.nz - 1) % g.nz;
    for (int i = 0; i < g.nx; ++i) {
      const int il = (i + g.nx - 1) % g.nx;
      out[g.index(i, j)] = {
          .ux = (vel.u_east(i, j) - vel.u_east(il, j)) / g.dx(),
          .uz = (vel.u_north(i, j) - vel.u_north(i, jl)) / g.dz(),
          .wx = (vel.w_east(i, j) - vel.w_east(il, j)) / g.dx(),
          .wz = (vel.w_north(i, j) - vel.w_north(i, jl)) / g.dz(),
      };
    }
  }
  return out;
}

struct SpectralSolver2D::Plans {
  double* real = nullptr;
  fftw_complex* spec = nullptr;
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;

  ~Plans() {
    std::lock_guard lock(fftw_planner_mutex());
    if (forward) fftw_destroy_plan(forward);
    if (backward) fftw_destroy_plan(backward);
    fftw_free(real);
    fftw_free(spec);
  }
};

SpectralSolver2D::SpectralSolver2D(const Grid2D& grid) : grid_(grid), kx_count_(grid.nx / 2 + 1) {
  grid_.validate();
  const double pi = std::numbers::pi;
  gx_.resize(kx_count_);
  lx_.resize(kx_count_);
  for (int a = 0; a < kx_count_; ++a) {
    gx_[a] = std::sin(2.0 * pi * a / grid_.nx) / grid_.dx();
    const double s = std::sin(pi * a / grid_.nx);
    lx_[a] = -4.0 * s * s / (grid_.dx() * grid_.dx());
  }
  gz_.resize(grid_.nz);
  lz_.resize(grid_.nz);
  for (int b = 0; b < grid_.nz; ++b) {
    gz_[b] = std::sin(2.0 * pi * b / grid_.nz) / grid_.dz();
    const double s = std::sin(pi * b / grid_.nz);
    lz_[b] = -4.0 * s * s / (grid_.dz() * grid_.dz());
  }

  const std::size_t n_spec = static_cast<std::size_t>(grid_.nz) * kx_count_;
  plans_ = std::make_unique<Plans>();
  std::lock_guard lock(fftw_planner_mutex());
  plans_->real = fftw_alloc_real(grid_.cells());
  plans_->spec = fftw_alloc_complex(n_spec);
  plans_->forward = fftw_plan_dft_r2c_2d(grid_.nz, grid_.nx, plans_->real, plans_->spec, FFTW_ESTIMATE);
  plans_->backward = fftw_plan_dft_c2r_2d(grid_.nz, grid_.nx, plans_->spec, plans_->real, FFTW_ESTIMATE);
  if (!plans_->forward || !plans_->backward) throw Error(ErrorKind::solver, "FFT planning failed");
  u_hat_.resize(n_spec);
  w_hat_.resize(n_spec);
}

SpectralSolver2D::~SpectralSolver2D() = default;

void SpectralSolver2D::forward(std::span<const double> q, std::vector<std::complex<double>>& hat) {
  std::copy(q.begin(), q.end(), plans_->real);
  fftw_execute(plans_->forward);
  const auto* s = reinterpret_cast<const std::complex<double>*>(plans_->spec);
  std::copy(s, s + hat.size(), hat.begin());
}

void SpectralSolver2D::backward(const std::vector<std::complex<double>>& hat, std::span<double> q) {
  std::copy(hat.begin(), hat.end(), reinterpret_cast<std::complex<double>*>(plans_->spec));
  fftw_execute(plans_->backward);
  const double scale = 1.0 / grid_.cells();
  for (std::size_t k = 0; k < q.size(); ++k) q[k] = plans_->real[k] * scale;
}

template <class Multiplier>
void SpectralSolver2D::apply(std::span<double> U, std::span<double> W, Multiplier&& m) {
  if (U.size() != static_cast<std::size_t>(grid_.cells()) || W.size() != U.size())
    throw Error(ErrorKind::dimension, "velocity arrays do not match the spectral grid");
  forward(U, u_hat_);
  forward(W, w_hat_);
  for (int b = 0; b < grid_.nz; ++b)
    for (int a = 0; a < kx_count_; ++a) {
      const std::size_t k = static_cast<std::size_t>(b) * kx_count_ + a;
      m(a, b, u_hat_[k], w_hat_[k]);
    }
  backward(u_hat_, U);
  backward(w_hat_, W);
}

void SpectralSolver2D::project(std::span<double> U, std::span<double> W) {
  apply(U, W, [this](int a, int b, std::complex<double>& u, std::complex<double>& w) {
    const double gx = gx_[a], gz = gz_[b];
    const double g2 = gx * gx + gz * gz;
    if (g2 == 0.0) return;  // mode is invisible to the discrete divergence
    const std::complex<double> s = (gx * u + gz * w) / g2;
    u -= gx * s;
    w -= gz * s;
  });
}

void SpectralSolver2D::diffuse_and_project(std::span<double> U, std::span<double> W, double nu_dt) {
  apply(U, W, [this, nu_dt](int a, int b, std::complex<double>& u, std::complex<double>& w) {
    const double sigma = lx_[a] + lz_[b];
    const double amp = (1.0 + 0.5 * nu_dt * sigma) / (1.0 - 0.5 * nu_dt * sigma);
    u *= amp;
    w *= amp;
    const double gx = gx_[a], gz = gz_[b];
    const double g2 = gx * gx + gz * gz;
    if (g2 == 0.0) return;
    const std::complex<double> s = (gx * u + gz * w) / g2;
    u -= gx * s;
    w -= gz * s;
  });
}

void advection_rate_2d(const StaggeredVelocity2D& vel, std::span<const double> q, Limiter limiter,
                       std::span<double> rate) {
  const Grid2D& g = vel.grid;
  const int nx = g.nx, nz = g.nz;
  auto at = [&](int i, int j) { return q[g.index((i + nx) % nx, (j + nz) % nz)]; };
  // Upwind face value with a limited slope from the upwind cell.
  auto face = [limiter](double up2, double up, double down) {
    const double d = down - up;
    if (d == 0.0) return up;
    return up + 0.5 * limiter_phi(limiter, (up - up2) / d) * d;
  };

  std::vector<double> fx(g.cells()), fz(g.cells());
  for (int j = 0; j < nz; ++j)
    for (int i = 0; i < nx; ++i) {
      const double ue = vel.u_east(i, j);
      const double qe = ue >= 0.0 ? face(at(i - 1, j), at(i, j), at(i + 1, j))
                                  : face(at(i + 2, j), at(i + 1, j), at(i, j));
      fx[g.index(i, j)] = ue * qe;
      const double wn = vel.w_north(i, j);
      const double qn = wn >= 0.0 ? face(at(i, j - 1), at(i, j), at(i, j + 1))
                                  : face(at(i, j + 2), at(i, j + 1), at(i, j));
      fz[g.index(i, j)] = wn * qn;
    }
  for (int j = 0; j < nz; ++j)
    for (int i = 0; i < nx; ++i) {
      const int c = g.index(i, j);
      const int w = g.index((i + nx - 1) % nx, j), s = g.index(i, (j + nz - 1) % nz);
      rate[c] = (fx[c] - fx[w]) / g.dx() + (fz[c] - fz[s]) / g.dz() - q[c] * vel.divergence(i, j);
    }
}

namespace {

// Heun step of u_t = -P (u.grad) u for a solenoidal input.
void advect_heun(StaggeredVelocity2D& vel, double dt, SpectralSolver2D& solver, Limiter limiter) {
  const std::size_t n = vel.U.size();
  std::vector<double> ru(n), rw(n);
  StaggeredVelocity2D stage = vel;

  advection_rate_2d(vel, vel.U, limiter, ru);
  advection_rate_2d(vel, vel.W, limiter, rw);
  for (std::size_t c = 0; c < n; ++c) {
    stage.U[c] -= dt * ru[c];
    stage.W[c] -= dt * rw[c];
  }
  solver.project(stage.U, stage.W);

  advection_rate_2d(stage, stage.U, limiter, ru);
  advection_rate_2d(stage, stage.W, limiter, rw);
  for (std::size_t c = 0; c < n; ++c) {
    vel.U[c] = 0.5 * (vel.U[c] + stage.U[c] - dt * ru[c]);
    vel.W[c] = 0.5 * (vel.W[c] + stage.W[c] - dt * rw[c]);
  }
  solver.project(vel.U, vel.W);
}

}  // namespace

void navier_stokes_step_2d(StaggeredVelocity2D& vel, double dt, double Re, SpectralSolver2D& solver,
                           const NavierStokesOptions& options) {
  if (!(dt > 0.0)) throw Error(ErrorKind::contract, "Navier-Stokes step needs dt > 0");
  if (!(Re > 0.0)) throw Error(ErrorKind::config, "Re must be > 0");
  const Grid2D& g = solver.grid();
  if (g.nx != vel.grid.nx || g.nz != vel.grid.nz) throw Error(ErrorKind::dimension, "solver grid differs");

  solver.project(vel.U, vel.W);
  advect_heun(vel, 0.5 * dt, solver, options.limiter);
  solver.diffuse_and_project(vel.U, vel.W, dt / Re);
  advect_heun(vel, 0.5 * dt, solver, options.limiter);

  double scale = 0.0;
  for (std::size_t c = 0; c < vel.U.size(); ++c) scale = std::max({scale, std::abs(vel.U[c]), std::abs(vel.W[c])});
  const double div = vel.max_divergence();
  if (!std::isfinite(div) || div > options.divergence_tol * std::max(1.0, scale))
    throw Error(ErrorKind::solver, "projection left a discrete divergence of " + std::to_string(div));
}

double kinetic_energy(const StaggeredVelocity2D& vel) {
  double e = 0.0;
  for (std::size_t c = 0; c < vel.U.size(); ++c) e += vel.U[c] * vel.U[c] + vel.W[c] * vel.W[c];
  return 0.5 * e * vel.grid.dx() * vel.grid.dz();
}

}  // namespace rodsed
