#pragma once

#include <string>
#include <variant>

#include "rodsed/flow.hpp"
#include "rodsed/indicator.hpp"
#include "rodsed/solver1d.hpp"
#include "rodsed/solver2d.hpp"

namespace rodsed {

// A snapshot is a pair of CSV files. The moment file starts with
//   # {json header: dim, time, grid, regions, params, velocity_file}
// followed by a column row and one row per cell: x[,z], rho, C1, S1, ...,
// with empty fields where the cell order is below the maximum, and optional
// trailing indicator columns. The velocity file holds w at the nodes (1D) or
// U, W at the cell centres (2D).

struct Snapshot1D {
  double time;
  ModelParams params;
  MomentField1D moments;
  StaggeredVelocity1D velocity;
};

struct Snapshot2D {
  double time;
  ModelParams params;
  MomentField2D moments;
  StaggeredVelocity2D velocity;
};

using Snapshot = std::variant<Snapshot1D, Snapshot2D>;

/// Writes `path` and the velocity file next to it; returns the velocity path.
std::string write_snapshot(const std::string& path, double time, const ModelParams& params, const MomentField1D& q,
                           const StaggeredVelocity1D& w, const IndicatorFields* indicator = nullptr);
std::string write_snapshot(const std::string& path, double time, const ModelParams& params, const MomentField2D& q,
                           const StaggeredVelocity2D& v, const IndicatorFields* indicator = nullptr);

Snapshot read_snapshot(const std::string& path);

/// Velocity file name belonging to a moment file.
std::string velocity_path(const std::string& path);

}  // namespace rodsed
