#include "rodsed/solver1d.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rodsed/error.hpp"
#include "rodsed/moment_model.hpp"

namespace rodsed {

ResolutionMap::ResolutionMap(std::vector<Region> regions) : regions_(std::move(regions)) {
  if (regions_.empty()) throw Error(ErrorKind::config, "resolution map has no regions");
  std::sort(regions_.begin(), regions_.end(), [](const Region& l, const Region& r) { return l.a < r.a; });
  for (const Region& r : regions_) {
    if (r.order < 1) throw Error(ErrorKind::invalid_order, "region order must be >= 1");
    if (!(r.b > r.a)) throw Error(ErrorKind::config, "region [a,b] needs b > a");
  }
  const double scale = std::max(std::abs(regions_.front().a), std::abs(regions_.back().b)) + 1.0;
  for (std::size_t k = 1; k < regions_.size(); ++k)
    if (std::abs(regions_[k].a - regions_[k - 1].b) > 1e-12 * scale)
      throw Error(ErrorKind::config, "resolution regions overlap or leave a gap");
}

ResolutionMap ResolutionMap::uniform(double a, double b, int order) { return ResolutionMap({{a, b, order}}); }

int ResolutionMap::min_order() const {
  return std::min_element(regions_.begin(), regions_.end(), [](auto& l, auto& r) { return l.order < r.order; })
      ->order;
}

int ResolutionMap::max_order() const {
  return std::max_element(regions_.begin(), regions_.end(), [](auto& l, auto& r) { return l.order < r.order; })
      ->order;
}

int ResolutionMap::order_at(double x) const {
  for (const Region& r : regions_)
    if (x < r.b) return r.order;
  return regions_.back().order;
}

std::vector<int> ResolutionMap::cell_orders(const Grid1D& grid) const {
  std::vector<int> orders(grid.cells);
  for (int i = 0; i < grid.cells; ++i) orders[i] = order_at(grid.center(i));
  return orders;
}

void ResolutionMap::validate(const Grid1D& grid) const {
  const double tol = 1e-12 * (std::abs(grid.x_left) + std::abs(grid.x_right) + 1.0);
  if (std::abs(regions_.front().a - grid.x_left) > tol || std::abs(regions_.back().b - grid.x_right) > tol)
    throw Error(ErrorKind::config, "resolution map does not cover the grid domain");
}

MomentField1D::MomentField1D(Grid1D grid, ResolutionMap resolution)
    : grid_(grid), resolution_(std::move(resolution)) {
  grid_.validate();
  resolution_.validate(grid_);
  orders_ = resolution_.cell_orders(grid_);
  offsets_.resize(grid_.cells + 1, 0);
  for (int i = 0; i < grid_.cells; ++i) offsets_[i + 1] = offsets_[i] + moment_count(orders_[i]);
  data_.assign(offsets_.back(), 0.0);
}

void MomentField1D::set_cell(int i, std::span<const double> q) {
  auto dst = cell(i);
  std::fill(dst.begin(), dst.end(), 0.0);
  std::copy_n(q.begin(), std::min(q.size(), dst.size()), dst.begin());
}

std::vector<double> MomentField1D::rho_profile() const {
  std::vector<double> r(cells());
  for (int i = 0; i < cells(); ++i) r[i] = rho(i);
  return r;
}

double MomentField1D::mean_rho() const {
  double sum = 0.0;
  for (int i = 0; i < cells(); ++i) sum += rho(i);
  return sum / cells();
}

std::vector<double> MomentField1D::component_totals(std::size_t components) const {
  std::vector<double> totals(components, 0.0);
  for (int i = 0; i < cells(); ++i) {
    auto q = cell(i);
    for (std::size_t k = 0; k < std::min(components, q.size()); ++k) totals[k] += q[k];
  }
  return totals;
}

bool MomentField1D::all_finite() const {
  return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

double max_wave_speed(const MomentField1D& field) {
  double s = 0.0;
  for (const Region& r : field.resolution().regions()) s = std::max(s, moment_operator_x(r.order).max_abs_eigenvalue());
  return s;
}

double cfl_dt(const MomentField1D& field, double cfl) {
  if (!(cfl > 0.0 && cfl <= 1.0)) throw Error(ErrorKind::config, "cfl must lie in (0, 1]");
  return cfl * field.grid().dx() / max_wave_speed(field);
}

WavePropagation1D::WavePropagation1D(const MomentField1D& layout, WaveOptions options)
    : options_(options), orders_(layout.orders()) {
  const int m = layout.cells();
  const int max_order = layout.resolution().max_order();
  ops_.assign(max_order + 1, nullptr);
  for (int n : orders_)
    if (!ops_[n]) ops_[n] = &moment_operator_x(n);
  max_speed_ = max_wave_speed(layout);

  auto ord = [&](int i) { return orders_[((i % m) + m) % m]; };
  alpha_slots_.resize(m);
  std::size_t total = 0;
  for (int k = 0; k < m; ++k) {
    // Interface k separates cells k and k+1. Its own waves need orders of both
    // sides; the neighbour interfaces ask for their upwind comparison at
    // orders ord(k-1) and ord(k+2).
    for (int n : {ord(k), ord(k + 1), ord(k - 1), ord(k + 2)}) {
      auto& slots = alpha_slots_[k];
      if (std::none_of(slots.begin(), slots.end(), [n](const AlphaSlot& s) { return s.order == n; })) {
        slots.push_back({n, total});
        total += moment_count(n);
      }
    }
  }
  alphas_.assign(total, 0.0);

  iface_offset_.resize(m + 1, 0);
  for (int k = 0; k < m; ++k) iface_offset_[k + 1] = iface_offset_[k] + moment_count(std::max(ord(k), ord(k + 1)));
  amdq_.assign(iface_offset_.back(), 0.0);
  apdq_.assign(iface_offset_.back(), 0.0);
  flux_.assign(iface_offset_.back(), 0.0);
  jump_.assign(moment_count(max_order), 0.0);
  coeff_.assign(moment_count(max_order), 0.0);
}

std::span<const double> WavePropagation1D::alpha(int interface, int order) const {
  const int m = static_cast<int>(orders_.size());
  const int k = ((interface % m) + m) % m;
  for (const AlphaSlot& s : alpha_slots_[k])
    if (s.order == order) return {alphas_.data() + s.offset, moment_count(order)};
  throw Error(ErrorKind::contract, "wave strengths at interface " + std::to_string(k) + " not prepared for order " +
                                       std::to_string(order));
}

void WavePropagation1D::compute_alphas(const MomentField1D& field) {
  const int m = field.cells();
  for (int k = 0; k < m; ++k) {
    const auto ql = field.cell(k);
    const auto qr = field.cell((k + 1) % m);
    for (const AlphaSlot& s : alpha_slots_[k]) {
      const std::size_t n = moment_count(s.order);
      for (std::size_t c = 0; c < n; ++c)
        jump_[c] = (c < qr.size() ? qr[c] : 0.0) - (c < ql.size() ? ql[c] : 0.0);
      ops_[s.order]->wave_strengths(std::span(jump_).first(n), std::span(alphas_).subspan(s.offset, n));
    }
  }
}

void WavePropagation1D::compute_interface(const MomentField1D& field, int k, double nu) {
  const int m = field.cells();
  const int left_order = orders_[k];
  const int right_order = orders_[(k + 1) % m];
  const int order = std::max(left_order, right_order);
  const std::size_t n = moment_count(order);
  const HyperbolicOperator& high = *ops_[order];

  std::span<double> amdq(amdq_.data() + iface_offset_[k], n);
  std::span<double> apdq(apdq_.data() + iface_offset_[k], n);
  std::span<double> flux(flux_.data() + iface_offset_[k], n);

  const auto ql = field.cell(k);
  const auto qr = field.cell((k + 1) % m);
  for (std::size_t c = 0; c < n; ++c) jump_[c] = (c < qr.size() ? qr[c] : 0.0) - (c < ql.size() ? ql[c] : 0.0);

  // Fluctuation into the higher-order cell from the order-K decomposition; the
  // other one is the remainder of A^K times the padded jump.
  const auto a = alpha(k, order);
  const auto lambda = high.eigenvalues();
  const bool high_right = right_order >= left_order;
  std::span<double> moving = high_right ? apdq : amdq;
  std::span<double> remainder = high_right ? amdq : apdq;
  std::fill(moving.begin(), moving.end(), 0.0);
  for (std::size_t p = 0; p < n; ++p) {
    const double l = high_right ? std::max(lambda[p], 0.0) : std::min(lambda[p], 0.0);
    if (l == 0.0 || a[p] == 0.0) continue;
    const auto r = high.eigenvector(p);
    const double w = l * a[p];
    for (std::size_t c = 0; c < n; ++c) moving[c] += w * r[c];
  }
  apply_moment_matrix_x(std::span<const double>(jump_).first(n), remainder);
  for (std::size_t c = 0; c < n; ++c) remainder[c] -= moving[c];

  std::fill(flux.begin(), flux.end(), 0.0);
  if (!options_.second_order) return;

  // Second-order correction. Left-going waves live at the left order and are
  // limited against the interface to the right; right-going waves at the right
  // order against the interface to the left.
  auto add_corrections = [&](int wave_order, bool left_going) {
    const HyperbolicOperator& op = *ops_[wave_order];
    const std::size_t nw = op.size();
    const auto aw = alpha(k, wave_order);
    const auto up = alpha(left_going ? k + 1 : k - 1, wave_order);
    const auto lw = op.eigenvalues();
    for (std::size_t p = 0; p < nw; ++p) {
      const double l = lw[p];
      if (left_going ? !(l < 0.0) : !(l > 0.0)) continue;
      if (aw[p] == 0.0) continue;
      const double phi = limiter_phi(options_.limiter, up[p] / aw[p]);
      const double g = 0.5 * std::abs(l) * (1.0 - nu * std::abs(l)) * phi * aw[p];
      const auto r = op.eigenvector(p);
      for (std::size_t c = 0; c < nw; ++c) flux[c] += g * r[c];
    }
  };
  add_corrections(left_order, true);
  add_corrections(right_order, false);
}

void WavePropagation1D::step(MomentField1D& field, double dt) {
  if (field.orders() != orders_) throw Error(ErrorKind::contract, "field layout differs from the stepper layout");
  const double dx = field.grid().dx();
  if (!(dt >= 0.0)) throw Error(ErrorKind::cfl, "negative time step");
  if (dt * max_speed_ > dx * (1.0 + 1e-12))
    throw Error(ErrorKind::cfl, "dt = " + std::to_string(dt) + " exceeds the stability bound " +
                                    std::to_string(dx / max_speed_));
  if (dt == 0.0) return;
  const double nu = dt / dx;
  const int m = field.cells();

  compute_alphas(field);
  for (int k = 0; k < m; ++k) compute_interface(field, k, nu);

  for (int i = 0; i < m; ++i) {
    auto q = field.cell(i);
    const int left = (i + m - 1) % m;
    const double* ap = apdq_.data() + iface_offset_[left];
    const double* fl = flux_.data() + iface_offset_[left];
    const double* am = amdq_.data() + iface_offset_[i];
    const double* fr = flux_.data() + iface_offset_[i];
    // Every interface buffer is at least as long as either adjacent cell.
    for (std::size_t c = 0; c < q.size(); ++c) q[c] -= nu * (ap[c] + am[c]) + nu * (fr[c] - fl[c]);
  }
}

void step_homogeneous(MomentField1D& field, double dt, const WaveOptions& options) {
  WavePropagation1D(field, options).step(field, dt);
}

MomentField1D run_generalised_rp_experiment(const RiemannExperiment& e) {
  if (e.n_left < 1 || e.n_right < 1) throw Error(ErrorKind::invalid_order, "orders must be >= 1");
  if (!(e.x_left < 0.0 && e.x_right > 0.0)) throw Error(ErrorKind::config, "domain must contain x = 0");
  if (!(e.t_end >= 0.0)) throw Error(ErrorKind::config, "t_end must be >= 0");
  const Grid1D grid{e.x_left, e.x_right, e.cells};
  MomentField1D field(grid, ResolutionMap({{e.x_left, 0.0, e.n_left}, {0.0, e.x_right, e.n_right}}));
  const MomentVector left = steady_state_moments(e.wxDr_left, e.n_left);
  const MomentVector right = steady_state_moments(e.wxDr_right, e.n_right);
  for (int i = 0; i < grid.cells; ++i) field.set_cell(i, grid.center(i) < 0.0 ? left.values() : right.values());

  WavePropagation1D stepper(field, e.wave);
  const double dt_max = cfl_dt(field, e.cfl);
  double t = 0.0;
  while (t < e.t_end) {
    const long remaining = static_cast<long>(std::ceil((e.t_end - t) / dt_max - 1e-9));
    const double dt = (e.t_end - t) / std::max(remaining, 1L);
    stepper.step(field, dt);
    t = remaining <= 1 ? e.t_end : t + dt;
  }
  return field;
}

}  // namespace rodsed
