#pragma once

#include <algorithm>
#include <vector>

#include "rodsed/flow.hpp"
#include "rodsed/solver1d.hpp"
#include "rodsed/solver2d.hpp"

namespace rodsed {

/// Cell fields |R_{2N+2}| and |R_{2N+3}|: the defect of the zero-padded
/// order-N solution in the two extra equations of the order N+1 system.
struct IndicatorFields {
  std::vector<double> r_even;  // |R_{2N+2}|
  std::vector<double> r_odd;   // |R_{2N+3}|

  double max_even() const;
  double max_odd() const;
  double max_at(std::size_t i) const { return std::max(r_even[i], r_odd[i]); }
};

/// Centred differences of cell values. A neighbour of lower order contributes
/// zero for the moments it lacks.
IndicatorFields residuals_1d(const MomentField1D& field, const StaggeredVelocity1D& vel);
IndicatorFields residuals_2d(const MomentField2D& field, const StaggeredVelocity2D& vel);

struct Threshold {
  double level;
  int order;
};

struct MapOptions {
  int base_order = 1;
  double min_width = 0.0;  // shorter runs are absorbed by a neighbour
};

/// Cells whose indicator exceeds a level get that threshold's order (the
/// first exceeded, thresholds sorted by descending level); all others get
/// the base order.
ResolutionMap suggest_resolution_map(const IndicatorFields& indicator, const Grid1D& grid,
                                     const std::vector<Threshold>& thresholds, const MapOptions& options = {});

std::vector<double> entropy_field(const MomentField1D& field);
std::vector<double> entropy_field(const MomentField2D& field);
double total_entropy(const MomentField1D& field);
double total_entropy(const MomentField2D& field);

}  // namespace rodsed
