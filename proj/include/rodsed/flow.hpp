#pragma once

#include <complex>
#include <memory>
#include <span>
#include <vector>

#include "rodsed/grid.hpp"
#include "rodsed/moment_model.hpp"
#include "rodsed/riemann.hpp"

namespace rodsed {

/// Shear-flow velocity at the nodes: w[i] approximates w(x_{i+1/2}), the
/// right face of cell i. Node m-1/2 wraps to -1/2.
struct StaggeredVelocity1D {
  Grid1D grid;
  std::vector<double> w;

  explicit StaggeredVelocity1D(Grid1D g) : grid(g), w(g.cells, 0.0) {}
  double node_x(int i) const { return grid.x_left + (i + 1) * grid.dx(); }
};

/// Periodic system with sub/super-diagonal a and diagonal b:
///   a x[i-1] + b x[i] + a x[i+1] = rhs[i]. Solved in place (Thomas plus
/// Sherman-Morrison for the corner entries).
void solve_cyclic_symmetric_tridiagonal(double a, double b, std::span<double> rhs);

/// Crank-Nicolson step of Re w_t = w_xx.
void cn_diffusion_step(StaggeredVelocity1D& vel, double dt, double Re);

/// w += dt (delta/Re) (rho_bar - rho_node), rho_node the mean of the two
/// cells sharing the node.
void buoyancy_source_step_1d(StaggeredVelocity1D& vel, std::span<const double> rho_cells, double rho_bar, double dt,
                             double delta, double Re);

/// Cell-centred (w_{i+1/2} - w_{i-1/2}) / dx.
std::vector<double> gradient_w_1d(const StaggeredVelocity1D& vel);

/// Cell-centred velocities; edge values are the averages of the two
/// adjacent centres and are computed on demand.
struct StaggeredVelocity2D {
  Grid2D grid;
  std::vector<double> U;
  std::vector<double> W;

  explicit StaggeredVelocity2D(Grid2D g) : grid(g), U(g.cells(), 0.0), W(g.cells(), 0.0) {}

  double u_east(int i, int j) const;   // u_{i+1/2,j}
  double u_north(int i, int j) const;  // u_{i,j+1/2}
  double w_east(int i, int j) const;   // w_{i+1/2,j}
  double w_north(int i, int j) const;  // w_{i,j+1/2}
  /// (u_{i+1/2,j} - u_{i-1/2,j})/dx + (w_{i,j+1/2} - w_{i,j-1/2})/dz
  double divergence(int i, int j) const;
  double max_divergence() const;
};

/// W -= dt (delta/Re) rho.
void buoyancy_source_step_2d(StaggeredVelocity2D& vel, std::span<const double> rho_cells, double dt, double delta,
                             double Re);

/// The four edge-difference derivatives of every cell.
std::vector<VelocityGradient2D> gradients_2d(const StaggeredVelocity2D& vel);

/// Doubly periodic spectral operators matching the staggered stencils: the
/// projection removes the edge-averaged divergence exactly, and the
/// Crank-Nicolson diffusion uses the five-point Laplacian symbol.
class SpectralSolver2D {
 public:
  explicit SpectralSolver2D(const Grid2D& grid);
  ~SpectralSolver2D();
  SpectralSolver2D(const SpectralSolver2D&) = delete;
  SpectralSolver2D& operator=(const SpectralSolver2D&) = delete;

  const Grid2D& grid() const noexcept { return grid_; }

  void project(std::span<double> U, std::span<double> W);
  /// One Crank-Nicolson step of q_t = nu Laplacian(q) for each component,
  /// followed by the projection.
  void diffuse_and_project(std::span<double> U, std::span<double> W, double nu_dt);

 private:
  void forward(std::span<const double> q, std::vector<std::complex<double>>& hat);
  void backward(const std::vector<std::complex<double>>& hat, std::span<double> q);
  template <class Multiplier>
  void apply(std::span<double> U, std::span<double> W, Multiplier&& m);

  Grid2D grid_;
  int kx_count_;
  std::vector<double> gx_, gz_, lx_, lz_;
  struct Plans;
  std::unique_ptr<Plans> plans_;
  std::vector<std::complex<double>> u_hat_, w_hat_;
};

struct NavierStokesOptions {
  Limiter limiter = Limiter::mc;
  double divergence_tol = 1e-10;
};

/// One step of the incompressible Navier-Stokes equations without body force:
///   Re (u_t + (u.grad) u) + grad p = Laplacian u.
/// The input is first projected (this is where a preceding buoyancy update is
/// balanced by pressure), then advection (Heun, limited upwind face values)
/// and Crank-Nicolson diffusion are composed symmetrically, A(dt/2) D(dt) A(dt/2).
void navier_stokes_step_2d(StaggeredVelocity2D& vel, double dt, double Re, SpectralSolver2D& solver,
                           const NavierStokesOptions& options = {});

/// Flux-form advection (u.grad) q on cell-centred q with upwind limited face
/// values, corrected by q div(u) so that it is exact for non-solenoidal u.
void advection_rate_2d(const StaggeredVelocity2D& vel, std::span<const double> q, Limiter limiter,
                       std::span<double> rate);

double kinetic_energy(const StaggeredVelocity2D& vel);

}  // namespace rodsed
