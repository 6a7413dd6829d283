#pragma once

#include <limits>
#include <string>
#include <vector>

#include "rodsed/grid.hpp"
#include "rodsed/moment_model.hpp"
#include "rodsed/riemann.hpp"
#include "rodsed/solver1d.hpp"
#include "rodsed/splitting.hpp"

namespace rodsed {

enum class Preset { shear_accuracy, shear_adaptive, droplet_2d };

Preset parse_preset(const std::string& name);
const char* to_string(Preset preset);

struct ExperimentConfig {
  Preset preset = Preset::shear_accuracy;
  double x_left = 0.0;
  double x_right = 100.0;
  int cells = 512;
  double z_left = 0.0;  // 2D only
  double z_right = 100.0;
  int cells_z = 128;
  double t_end = 30.0;
  double cfl = 0.9;
  double dt_max = std::numeric_limits<double>::infinity();
  ModelParams params{0.01, 1.0, 1.0};
  int order = 1;
  std::vector<Region> regions;  // empty: uniform `order`
  Limiter limiter = Limiter::mc;
  GradientTiming timing = GradientTiming::current;
  std::vector<double> output_times;  // the final time is always written
  std::string out = "out";
  bool write_indicator = true;

  bool two_dimensional() const { return preset == Preset::droplet_2d; }
  Grid1D grid1d() const { return {x_left, x_right, cells}; }
  Grid2D grid2d() const { return {x_left, x_right, cells, z_left, z_right, cells_z}; }
  ResolutionMap resolution() const;
  /// Throws a config error describing the first violated constraint.
  void validate() const;
};

ExperimentConfig preset_config(Preset preset);

/// Sets one key. Unknown keys and malformed values are config errors.
void apply_setting(ExperimentConfig& config, const std::string& key, const std::string& value);

/// key = value lines; '#' starts a comment. `preset` lines are skipped: the
/// preset supplies the defaults the file is applied to (preset_in_config_file).
void apply_config_text(ExperimentConfig& config, const std::string& text, const std::string& origin = "<text>");
void apply_config_file(ExperimentConfig& config, const std::string& path);

/// Preset named in the file, if any (used to pick defaults before applying it).
std::string preset_in_config_file(const std::string& path);

/// "a:b:N,a:b:N,..."
std::vector<Region> parse_regions(const std::string& text);
std::vector<double> parse_real_list(const std::string& text);
std::vector<int> parse_int_list(const std::string& text);

}  // namespace rodsed
