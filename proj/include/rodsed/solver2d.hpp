#pragma once

#include <span>
#include <vector>

#include "rodsed/flow.hpp"
#include "rodsed/grid.hpp"
#include "rodsed/solver1d.hpp"

namespace rodsed {

/// Uniform-order moment field on a doubly periodic grid, cell-major storage.
class MomentField2D {
 public:
  MomentField2D(Grid2D grid, int order);

  const Grid2D& grid() const noexcept { return grid_; }
  int order() const noexcept { return order_; }
  std::size_t moments() const noexcept { return moments_; }

  std::span<double> cell(int c) { return {data_.data() + c * moments_, moments_}; }
  std::span<const double> cell(int c) const { return {data_.data() + c * moments_, moments_}; }
  std::span<double> cell(int i, int j) { return cell(grid_.index(i, j)); }
  std::span<const double> cell(int i, int j) const { return cell(grid_.index(i, j)); }
  std::span<double> data() noexcept { return data_; }
  std::span<const double> data() const noexcept { return data_; }

  double rho(int c) const { return data_[c * moments_]; }
  std::vector<double> rho_field() const;
  std::vector<double> component_totals() const;
  bool all_finite() const;

 private:
  Grid2D grid_;
  int order_;
  std::size_t moments_;
  std::vector<double> data_;
};

/// cfl / max over cells of ((|U| + lmax_x)/dx + (|W - 3/2| + lmax_z)/dz).
double cfl_dt_2d(const MomentField2D& field, const StaggeredVelocity2D& vel, double cfl);

/// Unsplit wave propagation with x- and z-fluctuations and limited
/// corrections, no transverse terms. Interface matrices use the edge
/// velocities u_{i+1/2,j}, w_{i,j+1/2}, frozen during the step.
class WavePropagation2D {
 public:
  WavePropagation2D(const Grid2D& grid, int order, WaveOptions options = {});

  void step(MomentField2D& field, const StaggeredVelocity2D& vel, double dt);

 private:
  void sweep(const MomentField2D& field, const StaggeredVelocity2D& vel, double dt, bool x_direction);

  Grid2D grid_;
  int order_;
  WaveOptions options_;
  const HyperbolicOperator& op_x_;
  const HyperbolicOperator& op_z_;
  std::vector<double> alpha_, speed_shift_, delta_, jump_;
};

void step_homogeneous_2d(MomentField2D& field, const StaggeredVelocity2D& vel, double dt,
                         const WaveOptions& options = {});

}  // namespace rodsed
