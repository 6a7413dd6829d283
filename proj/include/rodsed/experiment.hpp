#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "rodsed/config.hpp"
#include "rodsed/splitting.hpp"

namespace rodsed {

/// Exact cell averages of the preset's initial density.
std::vector<double> initial_density_1d(Preset preset, const Grid1D& grid);
std::vector<double> initial_density_2d(Preset preset, const Grid2D& grid);

ShearState initial_shear_state(const ExperimentConfig& config);
TwoDimState initial_twodim_state(const ExperimentConfig& config);

struct RunStats {
  long steps = 0;
  long retries = 0;  // 2D steps repeated with half the step size
  double initial_mass = 0.0;
  double final_mass = 0.0;

  double relative_mass_drift() const;
};

using ShearObserver = std::function<void(const ShearState&)>;
using TwoDimObserver = std::function<void(const TwoDimState&)>;

/// Advances to each output time and to t_end, calling the observer at each
/// of them (including t = 0 if listed). Each step takes
/// dt = remaining / ceil(remaining / min(step bound, dt_max)), with the bound
/// re-evaluated from the current state, so steps stay uniform while it holds.
ShearState simulate_shear(const ExperimentConfig& config, RunStats* stats = nullptr,
                          const ShearObserver& observer = {});
TwoDimState simulate_twodim(const ExperimentConfig& config, RunStats* stats = nullptr,
                            const TwoDimObserver& observer = {});

struct RunSummary {
  RunStats stats;
  std::vector<std::string> files;
  double min_rho = 0.0;
  double max_indicator_even = 0.0;
  double max_indicator_odd = 0.0;
};

/// Runs the experiment, writes snapshots into config.out, and prints a short
/// report to `log`.
RunSummary run_experiment(const ExperimentConfig& config, std::ostream& log);

}  // namespace rodsed
