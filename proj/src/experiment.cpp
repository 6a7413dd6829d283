#include "rodsed/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <numbers>
#include <numeric>
#include <ostream>

#include "rodsed/error.hpp"
#include "rodsed/indicator.hpp"
#include "rodsed/snapshot.hpp"

namespace rodsed {

namespace {

// Mean of exp(-a (x - c)^2) over [l, r].
double gaussian_average(double a, double c, double l, double r) {
  const double s = std::sqrt(a);
  return 0.5 * std::sqrt(std::numbers::pi / a) * (std::erf(s * (r - c)) - std::erf(s * (l - c))) / (r - l);
}

std::vector<double> output_schedule(const ExperimentConfig& config) {
  std::vector<double> t = config.output_times;
  if (t.empty() || t.back() < config.t_end) t.push_back(config.t_end);
  t.erase(std::unique(t.begin(), t.end()), t.end());
  return t;
}

double total_mass(const std::vector<double>& rho, double volume) {
  return std::accumulate(rho.begin(), rho.end(), 0.0) * volume;
}

Error with_context(const Error& e, long step, double time) {
  char buf[96];
  std::snprintf(buf, sizeof buf, " (step %ld, t = %.9g)", step, time);
  return Error(e.kind(), std::string(e.what()) + buf);
}

long steps_to(double remaining, double bound) {
  return std::max(1L, static_cast<long>(std::ceil(remaining / bound - 1e-9)));
}

}  // namespace

double RunStats::relative_mass_drift() const {
  return initial_mass == 0.0 ? std::abs(final_mass) : std::abs(final_mass - initial_mass) / std::abs(initial_mass);
}

std::vector<double> initial_density_1d(Preset preset, const Grid1D& grid) {
  double a = 0.0;
  switch (preset) {
    case Preset::shear_accuracy: a = 1.0; break;
    case Preset::shear_adaptive: a = 10.0; break;
    case Preset::droplet_2d: throw Error(ErrorKind::config, "droplet-2d is a 2D preset");
  }
  std::vector<double> rho(grid.cells);
  for (int i = 0; i < grid.cells; ++i) {
    const double l = grid.x_left + i * grid.dx();
    rho[i] = gaussian_average(a, 50.0, l, l + grid.dx());
  }
  return rho;
}

std::vector<double> initial_density_2d(Preset preset, const Grid2D& grid) {
  if (preset != Preset::droplet_2d) throw Error(ErrorKind::config, std::string(to_string(preset)) + " is a 1D preset");
  const double a = 0.025;
  std::vector<double> gx(grid.nx), gz(grid.nz);
  for (int i = 0; i < grid.nx; ++i) {
    const double l = grid.x_left + i * grid.dx();
    gx[i] = gaussian_average(a, 50.0, l, l + grid.dx());
  }
  for (int j = 0; j < grid.nz; ++j) {
    const double l = grid.z_left + j * grid.dz();
    gz[j] = gaussian_average(a, 75.0, l, l + grid.dz());
  }
  std::vector<double> rho(grid.cells());
  for (int j = 0; j < grid.nz; ++j)
    for (int i = 0; i < grid.nx; ++i) rho[grid.index(i, j)] = gx[i] * gz[j];
  return rho;
}

ShearState initial_shear_state(const ExperimentConfig& config) {
  const Grid1D g = config.grid1d();
  MomentField1D q(g, config.resolution());
  const auto rho = initial_density_1d(config.preset, g);
  for (int i = 0; i < g.cells; ++i) q.cell(i)[0] = rho[i];
  return ShearState(std::move(q), StaggeredVelocity1D(g));
}

TwoDimState initial_twodim_state(const ExperimentConfig& config) {
  const Grid2D g = config.grid2d();
  MomentField2D q(g, config.order);
  const auto rho = initial_density_2d(config.preset, g);
  for (int c = 0; c < g.cells(); ++c) q.cell(c)[0] = rho[c];
  return TwoDimState(std::move(q), StaggeredVelocity2D(g));
}

ShearState simulate_shear(const ExperimentConfig& config, RunStats* stats, const ShearObserver& observer) {
  config.validate();
  if (config.two_dimensional()) throw Error(ErrorKind::config, "simulate_shear needs a 1D preset");
  ShearState s = initial_shear_state(config);
  ShearSplitting split(s, config.params, WaveOptions{config.limiter, true}, config.timing);
  const double dx = config.grid1d().dx();
  RunStats local;
  local.initial_mass = total_mass(s.moments.rho_profile(), dx);

  for (double target : output_schedule(config)) {
    const double eps = 1e-12 * std::max(1.0, target);
    // The bound is re-evaluated every step (the relaxation limit follows the
    // shear); the remaining interval is split into equal steps under it.
    while (s.time < target - eps) {
      const double remaining = target - s.time;
      const double dt =
          remaining / static_cast<double>(steps_to(remaining, std::min(split.cfl_dt(s, config.cfl), config.dt_max)));
      try {
        split.step(s, dt);
      } catch (const Error& e) {
        throw with_context(e, local.steps, s.time);
      }
      ++local.steps;
      if (!s.moments.all_finite()) throw with_context(Error(ErrorKind::solver, "non-finite moments"), local.steps, s.time);
    }
    s.time = target;
    if (observer) observer(s);
  }
  local.final_mass = total_mass(s.moments.rho_profile(), dx);
  if (stats) *stats = local;
  return s;
}

TwoDimState simulate_twodim(const ExperimentConfig& config, RunStats* stats, const TwoDimObserver& observer) {
  config.validate();
  if (!config.two_dimensional()) throw Error(ErrorKind::config, "simulate_twodim needs a 2D preset");
  TwoDimState s = initial_twodim_state(config);
  TwoDimSplitting split(s, config.params, WaveOptions{config.limiter, true}, config.timing);
  const Grid2D g = config.grid2d();
  const double volume = g.dx() * g.dz();
  RunStats local;
  local.initial_mass = total_mass(s.moments.rho_field(), volume);

  for (double target : output_schedule(config)) {
    const double eps = 1e-12 * std::max(1.0, target);
    while (s.time < target - eps) {
      const double remaining = target - s.time;
      double dt = remaining / static_cast<double>(steps_to(remaining, std::min(split.cfl_dt(s, config.cfl), config.dt_max)));
      // The bound is evaluated with the velocity at the start of the step;
      // buoyancy and flow substeps can raise it before the transport substep.
      for (int attempt = 0;; ++attempt) {
        try {
          split.step(s, dt);
          break;
        } catch (const Error& e) {
          if (e.kind() != ErrorKind::cfl || attempt == 30) throw with_context(e, local.steps, s.time);
          dt *= 0.5;
          ++local.retries;
        }
      }
      ++local.steps;
      if (!s.moments.all_finite()) throw with_context(Error(ErrorKind::solver, "non-finite moments"), local.steps, s.time);
    }
    s.time = target;
    if (observer) observer(s);
  }
  local.final_mass = total_mass(s.moments.rho_field(), volume);
  if (stats) *stats = local;
  return s;
}

namespace {

std::string snapshot_name(const ExperimentConfig& config, double time) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s_t%.6g.csv", to_string(config.preset), time);
  return (std::filesystem::path(config.out) / buf).string();
}

double min_of(const std::vector<double>& v) { return *std::min_element(v.begin(), v.end()); }

}  // namespace

RunSummary run_experiment(const ExperimentConfig& config, std::ostream& log) {
  config.validate();
  std::error_code ec;
  std::filesystem::create_directories(config.out, ec);
  if (ec) throw Error(ErrorKind::io, "cannot create output directory '" + config.out + "': " + ec.message());

  RunSummary summary;
  auto record = [&](const std::string& path, const std::vector<double>& rho, const IndicatorFields* ind, double t) {
    summary.files.push_back(path);
    summary.min_rho = min_of(rho);
    if (ind) {
      summary.max_indicator_even = ind->max_even();
      summary.max_indicator_odd = ind->max_odd();
    }
    log << "t = " << t << "  min rho = " << summary.min_rho;
    if (ind) log << "  max|R_2N+2| = " << ind->max_even() << "  max|R_2N+3| = " << ind->max_odd();
    log << "  -> " << path << '\n';
  };

  log << "preset " << to_string(config.preset) << ", order " << config.order << ", t_end " << config.t_end << '\n';
  if (config.two_dimensional()) {
    simulate_twodim(config, &summary.stats, [&](const TwoDimState& s) {
      const std::string path = snapshot_name(config, s.time);
      IndicatorFields ind;
      if (config.write_indicator) ind = residuals_2d(s.moments, s.velocity);
      const IndicatorFields* p = config.write_indicator ? &ind : nullptr;
      summary.files.push_back(write_snapshot(path, s.time, config.params, s.moments, s.velocity, p));
      record(path, s.moments.rho_field(), p, s.time);
    });
  } else {
    simulate_shear(config, &summary.stats, [&](const ShearState& s) {
      const std::string path = snapshot_name(config, s.time);
      IndicatorFields ind;
      if (config.write_indicator) ind = residuals_1d(s.moments, s.velocity);
      const IndicatorFields* p = config.write_indicator ? &ind : nullptr;
      summary.files.push_back(write_snapshot(path, s.time, config.params, s.moments, s.velocity, p));
      record(path, s.moments.rho_profile(), p, s.time);
    });
  }
  log << "steps " << summary.stats.steps;
  if (summary.stats.retries) log << " (" << summary.stats.retries << " retried with half step)";
  log << ", mass " << summary.stats.initial_mass << " -> " << summary.stats.final_mass
      << ", relative drift " << summary.stats.relative_mass_drift() << '\n';
  return summary;
}

}  // namespace rodsed
