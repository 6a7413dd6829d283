#include "rodsed/indicator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "rodsed/error.hpp"

namespace rodsed {

namespace {

double max_of(const std::vector<double>& v) { return v.empty() ? 0.0 : *std::max_element(v.begin(), v.end()); }

struct Run {
  int begin;
  int end;  // exclusive
  int order;
};

}  // namespace

double IndicatorFields::max_even() const { return max_of(r_even); }
double IndicatorFields::max_odd() const { return max_of(r_odd); }

IndicatorFields residuals_1d(const MomentField1D& field, const StaggeredVelocity1D& vel) {
  const int m = field.cells();
  if (vel.grid.cells != m) throw Error(ErrorKind::dimension, "velocity and moment grids differ");
  const std::vector<double> wx = gradient_w_1d(vel);
  const double dx = field.grid().dx();

  // component k of cell j, zero if cell j does not carry it
  auto comp = [&](int j, std::size_t k) {
    j = (j + m) % m;
    const auto q = field.cell(j);
    return k < q.size() ? q[k] : 0.0;
  };

  IndicatorFields out{std::vector<double>(m), std::vector<double>(m)};
  for (int i = 0; i < m; ++i) {
    const int n = field.order(i);
    const std::size_t kc = c_index(n), ks = s_index(n);
    const double dS = (comp(i + 1, ks) - comp(i - 1, ks)) / (2 * dx);
    const double dC = (comp(i + 1, kc) - comp(i - 1, kc)) / (2 * dx);
    const double a = 0.5 * (n + 1) * wx[i];
    out.r_even[i] = std::abs(0.25 * dS + a * comp(i, ks));
    out.r_odd[i] = std::abs(0.25 * dC + a * comp(i, kc));
  }
  return out;
}

IndicatorFields residuals_2d(const MomentField2D& field, const StaggeredVelocity2D& vel) {
  const Grid2D& g = field.grid();
  if (vel.grid.nx != g.nx || vel.grid.nz != g.nz) throw Error(ErrorKind::dimension, "velocity and moment grids differ");
  const auto grad = gradients_2d(vel);
  const int n = field.order();
  const std::size_t kc = c_index(n), ks = s_index(n);
  const double dx = g.dx(), dz = g.dz(), a = 0.5 * (n + 1);

  IndicatorFields out{std::vector<double>(g.cells()), std::vector<double>(g.cells())};
  for (int j = 0; j < g.nz; ++j) {
    const int jn = (j + 1) % g.nz, js = (j + g.nz - 1) % g.nz;
    for (int i = 0; i < g.nx; ++i) {
      const int ie = (i + 1) % g.nx, iw = (i + g.nx - 1) % g.nx;
      const auto q = field.cell(i, j);
      const double C = q[kc], S = q[ks];
      const double dxS = (field.cell(ie, j)[ks] - field.cell(iw, j)[ks]) / (2 * dx);
      const double dxC = (field.cell(ie, j)[kc] - field.cell(iw, j)[kc]) / (2 * dx);
      const double dzS = (field.cell(i, jn)[ks] - field.cell(i, js)[ks]) / (2 * dz);
      const double dzC = (field.cell(i, jn)[kc] - field.cell(i, js)[kc]) / (2 * dz);
      const VelocityGradient2D& d = grad[g.index(i, j)];
      const double strain = d.wz - d.ux, shear = d.uz + d.wx;
      const int c = g.index(i, j);
      out.r_even[c] = std::abs(-0.25 * dxS - 0.25 * dzC - a * strain * C - a * shear * S);
      out.r_odd[c] = std::abs(0.25 * dxC - 0.25 * dzS - a * strain * S + a * shear * C);
    }
  }
  return out;
}

ResolutionMap suggest_resolution_map(const IndicatorFields& indicator, const Grid1D& grid,
                                     const std::vector<Threshold>& thresholds, const MapOptions& options) {
  grid.validate();
  if (thresholds.empty()) throw Error(ErrorKind::config, "no indicator thresholds given");
  for (std::size_t k = 1; k < thresholds.size(); ++k)
    if (!(thresholds[k].level < thresholds[k - 1].level))
      throw Error(ErrorKind::config, "thresholds must be sorted by strictly descending level");
  for (const Threshold& t : thresholds)
    if (t.order < 1) throw Error(ErrorKind::invalid_order, "threshold order must be >= 1");
  if (options.base_order < 1) throw Error(ErrorKind::invalid_order, "base order must be >= 1");
  if (static_cast<int>(indicator.r_even.size()) != grid.cells || indicator.r_odd.size() != indicator.r_even.size())
    throw Error(ErrorKind::dimension, "indicator size differs from grid");

  std::vector<Run> runs;
  for (int i = 0; i < grid.cells; ++i) {
    const double v = indicator.max_at(i);
    int order = options.base_order;
    for (const Threshold& t : thresholds)
      if (v > t.level) {
        order = t.order;
        break;
      }
    if (!runs.empty() && runs.back().order == order)
      runs.back().end = i + 1;
    else
      runs.push_back({i, i + 1, order});
  }

  // Absorb the shortest too-short run into its higher-order neighbour until
  // none is left; resolving more than asked is the safe direction.
  const double dx = grid.dx();
  while (runs.size() > 1) {
    std::size_t shortest = runs.size();
    for (std::size_t k = 0; k < runs.size(); ++k) {
      const double width = (runs[k].end - runs[k].begin) * dx;
      if (width < options.min_width - 1e-12 * dx &&
          (shortest == runs.size() || runs[k].end - runs[k].begin < runs[shortest].end - runs[shortest].begin))
        shortest = k;
    }
    if (shortest == runs.size()) break;
    std::size_t into;
    if (shortest == 0)
      into = 1;
    else if (shortest + 1 == runs.size())
      into = shortest - 1;
    else
      into = runs[shortest - 1].order >= runs[shortest + 1].order ? shortest - 1 : shortest + 1;
    runs[into].begin = std::min(runs[into].begin, runs[shortest].begin);
    runs[into].end = std::max(runs[into].end, runs[shortest].end);
    runs.erase(runs.begin() + static_cast<std::ptrdiff_t>(shortest));
    // neighbours of equal order are one region
    for (std::size_t k = 1; k < runs.size();) {
      if (runs[k].order == runs[k - 1].order) {
        runs[k - 1].end = runs[k].end;
        runs.erase(runs.begin() + static_cast<std::ptrdiff_t>(k));
      } else {
        ++k;
      }
    }
  }

  std::vector<Region> regions;
  for (const Run& r : runs) {
    const double a = r.begin == 0 ? grid.x_left : grid.x_left + r.begin * dx;
    const double b = r.end == grid.cells ? grid.x_right : grid.x_left + r.end * dx;
    regions.push_back({a, b, r.order});
  }
  ResolutionMap map(std::move(regions));
  map.validate(grid);
  return map;
}

std::vector<double> entropy_field(const MomentField1D& field) {
  std::vector<double> eta(field.cells());
  for (int i = 0; i < field.cells(); ++i) eta[i] = entropy(field.cell(i));
  return eta;
}

std::vector<double> entropy_field(const MomentField2D& field) {
  std::vector<double> eta(field.grid().cells());
  for (int c = 0; c < field.grid().cells(); ++c) eta[c] = entropy(field.cell(c));
  return eta;
}

double total_entropy(const MomentField1D& field) {
  const auto eta = entropy_field(field);
  return std::accumulate(eta.begin(), eta.end(), 0.0) * field.grid().dx();
}

double total_entropy(const MomentField2D& field) {
  const auto eta = entropy_field(field);
  return std::accumulate(eta.begin(), eta.end(), 0.0) * field.grid().dx() * field.grid().dz();
}

}  // namespace rodsed
