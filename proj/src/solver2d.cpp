#include "rodsed/solver2d.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rodsed/error.hpp"

namespace rodsed {

MomentField2D::MomentField2D(Grid2D grid, int order) : grid_(grid), order_(order), moments_(0) {
  grid_.validate();
  if (order < 1) throw Error(ErrorKind::invalid_order, "moment order must be >= 1");
  moments_ = moment_count(order);
  data_.assign(moments_ * grid_.cells(), 0.0);
}

std::vector<double> MomentField2D::rho_field() const {
  std::vector<double> r(grid_.cells());
  for (int c = 0; c < grid_.cells(); ++c) r[c] = rho(c);
  return r;
}

std::vector<double> MomentField2D::component_totals() const {
  std::vector<double> t(moments_, 0.0);
  for (int c = 0; c < grid_.cells(); ++c)
    for (std::size_t k = 0; k < moments_; ++k) t[k] += data_[c * moments_ + k];
  return t;
}

bool MomentField2D::all_finite() const {
  return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

double cfl_dt_2d(const MomentField2D& field, const StaggeredVelocity2D& vel, double cfl) {
  if (!(cfl > 0.0 && cfl <= 1.0)) throw Error(ErrorKind::config, "cfl must lie in (0, 1]");
  const Grid2D& g = field.grid();
  if (vel.U.size() != static_cast<std::size_t>(g.cells())) throw Error(ErrorKind::dimension, "velocity grid differs");
  const double lx = moment_operator_x(field.order()).max_abs_eigenvalue();
  const double lz = moment_operator_z(field.order()).max_abs_eigenvalue();
  double rate = 0.0;
  for (int c = 0; c < g.cells(); ++c)
    rate = std::max(rate, (std::abs(vel.U[c]) + lx) / g.dx() + (std::abs(vel.W[c] - 1.5) + lz) / g.dz());
  return cfl / rate;
}

WavePropagation2D::WavePropagation2D(const Grid2D& grid, int order, WaveOptions options)
    : grid_(grid),
      order_(order),
      options_(options),
      op_x_(moment_operator_x(order)),
      op_z_(moment_operator_z(order)) {
  grid_.validate();
  const std::size_t n = moment_count(order);
  alpha_.assign(n * grid_.cells(), 0.0);
  speed_shift_.assign(grid_.cells(), 0.0);
  delta_.assign(n * grid_.cells(), 0.0);
  jump_.assign(n, 0.0);
}

// Interface c of a sweep is the east (x) or north (z) face of cell c.
void WavePropagation2D::sweep(const MomentField2D& field, const StaggeredVelocity2D& vel, double dt,
                              bool x_direction) {
  const Grid2D& g = grid_;
  const HyperbolicOperator& op = x_direction ? op_x_ : op_z_;
  const std::size_t n = op.size();
  const double h = x_direction ? g.dx() : g.dz();
  const double nu = dt / h;
  auto neighbour = [&](int i, int j, int shift) {
    return x_direction ? g.index(((i + shift) % g.nx + g.nx) % g.nx, j)
                       : g.index(i, ((j + shift) % g.nz + g.nz) % g.nz);
  };

  for (int j = 0; j < g.nz; ++j)
    for (int i = 0; i < g.nx; ++i) {
      const int c = g.index(i, j);
      const auto ql = field.cell(c);
      const auto qr = field.cell(neighbour(i, j, 1));
      for (std::size_t k = 0; k < n; ++k) jump_[k] = qr[k] - ql[k];
      op.wave_strengths(jump_, std::span(alpha_).subspan(c * n, n));
      speed_shift_[c] = x_direction ? vel.u_east(i, j) : vel.w_north(i, j) - 1.5;
    }

  const auto lambda = op.eigenvalues();
  for (int j = 0; j < g.nz; ++j)
    for (int i = 0; i < g.nx; ++i) {
      const int c = g.index(i, j);
      const int right = neighbour(i, j, 1);
      const double* a = alpha_.data() + c * n;
      const double* a_left = alpha_.data() + neighbour(i, j, -1) * n;
      const double* a_right = alpha_.data() + right * n;
      double* dl = delta_.data() + c * n;
      double* dr = delta_.data() + right * n;
      for (std::size_t p = 0; p < n; ++p) {
        if (a[p] == 0.0) continue;
        const double s = lambda[p] + speed_shift_[c];
        double to_left = std::min(s, 0.0) * a[p];  // A^- contribution, applied to the left cell
        double to_right = std::max(s, 0.0) * a[p];
        if (options_.second_order && s != 0.0) {
          const double up = s > 0.0 ? a_left[p] : a_right[p];
          const double phi = limiter_phi(options_.limiter, up / a[p]);
          const double corr = 0.5 * std::abs(s) * (1.0 - nu * std::abs(s)) * phi * a[p];
          to_left += corr;
          to_right -= corr;
        }
        const auto r = op.eigenvector(p);
        for (std::size_t k = 0; k < n; ++k) {
          dl[k] -= nu * to_left * r[k];
          dr[k] -= nu * to_right * r[k];
        }
      }
    }
}

void WavePropagation2D::step(MomentField2D& field, const StaggeredVelocity2D& vel, double dt) {
  if (field.order() != order_ || field.grid().nx != grid_.nx || field.grid().nz != grid_.nz)
    throw Error(ErrorKind::contract, "field layout differs from the stepper layout");
  if (!(dt >= 0.0)) throw Error(ErrorKind::cfl, "negative time step");
  const double bound = cfl_dt_2d(field, vel, 1.0);
  if (dt > bound * (1.0 + 1e-12))
    throw Error(ErrorKind::cfl, "dt = " + std::to_string(dt) + " exceeds the stability bound " + std::to_string(bound));
  if (dt == 0.0) return;

  std::fill(delta_.begin(), delta_.end(), 0.0);
  sweep(field, vel, dt, true);
  sweep(field, vel, dt, false);
  auto data = field.data();
  for (std::size_t k = 0; k < data.size(); ++k) data[k] += delta_[k];
}

void step_homogeneous_2d(MomentField2D& field, const StaggeredVelocity2D& vel, double dt, const WaveOptions& options) {
  WavePropagation2D(field.grid(), field.order(), options).step(field, vel, dt);
}

}  // namespace rodsed
