#include "rodsed/study.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "rodsed/error.hpp"
#include "rodsed/experiment.hpp"

namespace rodsed {

std::vector<double> restrict_cells(std::span<const double> fine, int factor) {
  if (factor < 1) throw Error(ErrorKind::contract, "restriction factor must be >= 1");
  if (fine.size() % static_cast<std::size_t>(factor) != 0)
    throw Error(ErrorKind::dimension, "grids are not nested: " + std::to_string(fine.size()) + " cells, factor " +
                                          std::to_string(factor));
  std::vector<double> coarse(fine.size() / factor);
  for (std::size_t i = 0; i < coarse.size(); ++i) {
    double s = 0.0;
    for (int k = 0; k < factor; ++k) s += fine[i * factor + k];
    coarse[i] = s / factor;
  }
  return coarse;
}

std::optional<double> eoc(double coarse_error, double fine_error) {
  if (!(coarse_error > 0.0) || !(fine_error > 0.0)) return std::nullopt;
  return std::log2(coarse_error / fine_error);
}

double linf_distance(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw Error(ErrorKind::dimension, "fields differ in size");
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

std::vector<double> shear_density(ExperimentConfig config, int cells, int order) {
  config.cells = cells;
  config.order = order;
  config.regions.clear();
  config.output_times.clear();
  return simulate_shear(config).moments.rho_profile();
}

std::vector<AccuracyRow> accuracy_study(const ExperimentConfig& config, const std::vector<int>& grids,
                                        std::span<const double> reference) {
  if (grids.empty()) throw Error(ErrorKind::config, "no grids given");
  std::vector<AccuracyRow> rows;
  for (int n : grids) {
    if (n <= 0 || reference.size() % static_cast<std::size_t>(n) != 0)
      throw Error(ErrorKind::config, "grid " + std::to_string(n) + " is not nested in the reference grid of " +
                                         std::to_string(reference.size()) + " cells");
    const auto coarse = shear_density(config, n, config.order);
    const auto exact = restrict_cells(reference, static_cast<int>(reference.size()) / n);
    AccuracyRow row{n, linf_distance(coarse, exact), std::nullopt};
    if (!rows.empty()) row.eoc = eoc(rows.back().linf, row.linf);
    rows.push_back(row);
  }
  return rows;
}

std::vector<AccuracyRow> accuracy_study(const ExperimentConfig& config, const std::vector<int>& grids,
                                        int reference_cells, int reference_order) {
  const auto reference = shear_density(config, reference_cells, reference_order);
  return accuracy_study(config, grids, reference);
}

std::vector<double> kinetic_reference_1d(const KineticReference& s) {
  if (s.cells < 64 || s.theta_nodes < 64) throw Error(ErrorKind::config, "kinetic reference needs >= 64 cells and nodes");
  if (!(s.x_left < 0.0 && s.x_right > 0.0)) throw Error(ErrorKind::config, "domain must contain x = 0");
  if (!(s.t_end >= 0.0)) throw Error(ErrorKind::config, "t_end must be >= 0");

  const MomentVector left = steady_state_moments(s.wxDr_left, s.moment_order);
  const MomentVector right = steady_state_moments(s.wxDr_right, s.moment_order);
  const double period = s.x_right - s.x_left, left_width = -s.x_left;
  const double dx = period / s.cells;

  // Length of the left state within [x_left, y], continued periodically.
  auto left_measure = [&](double y) {
    const double u = y - s.x_left;
    const double k = std::floor(u / period);
    return k * left_width + std::min(u - k * period, left_width);
  };

  // f is pi-periodic in theta, so nodes on [0, pi) with doubled weight.
  const double h = std::numbers::pi / s.theta_nodes;
  std::vector<double> rho(s.cells, 0.0);
  for (int k = 0; k < s.theta_nodes; ++k) {
    const double theta = (k + 0.5) * h;
    const double fl = reconstruct_f(left, theta), fr = reconstruct_f(right, theta);
    const double shift = -std::cos(theta) * std::sin(theta) * s.t_end;
    for (int i = 0; i < s.cells; ++i) {
      const double a = s.x_left + i * dx - shift;
      const double ml = left_measure(a + dx) - left_measure(a);
      rho[i] += 2.0 * h * (ml * fl + (dx - ml) * fr) / dx;
    }
  }
  return rho;
}

}  // namespace rodsed
