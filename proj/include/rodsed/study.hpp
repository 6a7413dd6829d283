#pragma once

#include <optional>
#include <span>
#include <vector>

#include "rodsed/config.hpp"

namespace rodsed {

/// Mean over consecutive groups of `factor` fine cells.
std::vector<double> restrict_cells(std::span<const double> fine, int factor);

/// log2(coarse / fine); empty if either error is not positive.
std::optional<double> eoc(double coarse_error, double fine_error);

double linf_distance(std::span<const double> a, std::span<const double> b);

struct AccuracyRow {
  int cells;
  double linf;
  std::optional<double> eoc;  // against the previous row
};

/// Final density of a shear run of `config` on `cells` cells at uniform `order`.
std::vector<double> shear_density(ExperimentConfig config, int cells, int order);

/// Errors of the configured runs on each grid against a reference density on
/// a nested finer grid, restricted by averaging.
std::vector<AccuracyRow> accuracy_study(const ExperimentConfig& config, const std::vector<int>& grids,
                                        std::span<const double> reference);
std::vector<AccuracyRow> accuracy_study(const ExperimentConfig& config, const std::vector<int>& grids,
                                        int reference_cells, int reference_order);

/// Detailed transport model f_t + (-cos(theta) sin(theta) f)_x = 0 on a
/// periodic interval, started from the steady orientation densities at
/// wx/D_r on the two halves. Every theta slice is translated exactly, so the
/// result holds exact cell averages in x; rho is the midpoint rule in theta.
struct KineticReference {
  double wxDr_left = 1.0;
  double wxDr_right = 4.0;
  double t_end = 5.0;
  double x_left = -10.0;
  double x_right = 10.0;
  int cells = 800;
  int theta_nodes = 512;
  int moment_order = 32;  // truncation used to represent the steady densities
};

std::vector<double> kinetic_reference_1d(const KineticReference& setup);

}  // namespace rodsed
