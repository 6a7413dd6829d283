#pragma once

#include <span>
#include <vector>

#include "rodsed/grid.hpp"
#include "rodsed/riemann.hpp"

namespace rodsed {

struct Region {
  double a = 0.0;
  double b = 0.0;
  int order = 1;
};

/// Static partition of the domain into intervals of fixed moment order.
/// Regions are kept sorted by left end.
class ResolutionMap {
 public:
  explicit ResolutionMap(std::vector<Region> regions);
  static ResolutionMap uniform(double a, double b, int order);

  const std::vector<Region>& regions() const noexcept { return regions_; }
  int min_order() const;
  int max_order() const;

  // A cell belongs to the region containing its center.
  int order_at(double x) const;
  std::vector<int> cell_orders(const Grid1D& grid) const;

  /// Throws unless the regions tile [grid.x_left, grid.x_right] exactly.
  void validate(const Grid1D& grid) const;

 private:
  std::vector<Region> regions_;
};

/// Per-cell moment vectors in one flat array; cell i occupies
/// [offset(i), offset(i) + 2 order(i) + 1).
class MomentField1D {
 public:
  MomentField1D(Grid1D grid, ResolutionMap resolution);

  const Grid1D& grid() const noexcept { return grid_; }
  const ResolutionMap& resolution() const noexcept { return resolution_; }
  int cells() const noexcept { return grid_.cells; }
  int order(int i) const { return orders_[i]; }
  const std::vector<int>& orders() const noexcept { return orders_; }
  std::size_t offset(int i) const { return offsets_[i]; }

  std::span<double> cell(int i) { return {data_.data() + offsets_[i], offsets_[i + 1] - offsets_[i]}; }
  std::span<const double> cell(int i) const { return {data_.data() + offsets_[i], offsets_[i + 1] - offsets_[i]}; }
  std::span<double> data() noexcept { return data_; }
  std::span<const double> data() const noexcept { return data_; }

  /// Stores q in cell i, zero-padding or truncating to the cell order.
  void set_cell(int i, std::span<const double> q);

  double rho(int i) const { return data_[offsets_[i]]; }
  std::vector<double> rho_profile() const;
  double mean_rho() const;

  /// Cell sums of the first `components` entries (cells lacking a component
  /// contribute zero).
  std::vector<double> component_totals(std::size_t components) const;

  bool all_finite() const;

 private:
  Grid1D grid_;
  ResolutionMap resolution_;
  std::vector<int> orders_;
  std::vector<std::size_t> offsets_;
  std::vector<double> data_;
};

struct WaveOptions {
  Limiter limiter = Limiter::mc;
  bool second_order = true;
};

/// Largest |lambda| over the orders present.
double max_wave_speed(const MomentField1D& field);

/// cfl * dx / max |lambda|.
double cfl_dt(const MomentField1D& field, double cfl);

/// Wave-propagation stepper for a fixed cell-order layout. Holds the
/// per-interface workspace so repeated steps do not allocate.
class WavePropagation1D {
 public:
  WavePropagation1D(const MomentField1D& layout, WaveOptions options = {});

  void step(MomentField1D& field, double dt);
  const WaveOptions& options() const noexcept { return options_; }

 private:
  struct AlphaSlot {
    int order;
    std::size_t offset;
  };

  std::span<const double> alpha(int interface, int order) const;
  void compute_alphas(const MomentField1D& field);
  void compute_interface(const MomentField1D& field, int k, double nu);

  WaveOptions options_;
  std::vector<int> orders_;
  std::vector<const HyperbolicOperator*> ops_;  // indexed by order
  std::vector<std::vector<AlphaSlot>> alpha_slots_;
  std::vector<double> alphas_;
  std::vector<std::size_t> iface_offset_;  // per interface, length 2K+1
  std::vector<double> amdq_, apdq_, flux_;
  std::vector<double> jump_, coeff_;
  double max_speed_ = 0.0;
};

/// One homogeneous step in place. Throws a CFL error if dt exceeds the bound
/// at Courant number 1.
void step_homogeneous(MomentField1D& field, double dt, const WaveOptions& options = {});

struct RiemannExperiment {
  int n_left = 1;
  int n_right = 2;
  double wxDr_left = 1.0;
  double wxDr_right = 4.0;
  double t_end = 5.0;
  double x_left = -10.0;
  double x_right = 10.0;
  int cells = 800;
  double cfl = 0.9;
  WaveOptions wave{};
};

/// Piecewise steady initial data (x < 0 / x > 0) evolved by the homogeneous
/// system on a periodic grid. Returns the final field.
MomentField1D run_generalised_rp_experiment(const RiemannExperiment& experiment);

}  // namespace rodsed
