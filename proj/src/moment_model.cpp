#include "rodsed/moment_model.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "rodsed/error.hpp"

namespace rodsed {

void ModelParams::validate() const {
  if (!(D_r >= 0.0)) throw Error(ErrorKind::config, "D_r must be >= 0");
  if (!(Re > 0.0)) throw Error(ErrorKind::config, "Re must be > 0");
  if (!std::isfinite(delta)) throw Error(ErrorKind::config, "delta must be finite");
}

int order_of(std::size_t size) {
  if (size < 3 || size % 2 == 0)
    throw Error(ErrorKind::dimension, "moment vector length " + std::to_string(size) + " is not 2N+1 with N >= 1");
  return static_cast<int>((size - 1) / 2);
}

namespace {

void require_order(int order) {
  if (order < 1) throw Error(ErrorKind::invalid_order, "moment order must be >= 1, got " + std::to_string(order));
}

// Moment accessors with the closure and the C0 = rho/2, S0 = 0 convention.
struct Closed {
  std::span<const double> q;
  int n;
  double c(int l) const {
    if (l == 0) return 0.5 * q[0];
    return l > n ? 0.0 : q[c_index(l)];
  }
  double s(int l) const { return (l == 0 || l > n) ? 0.0 : q[s_index(l)]; }
};

}  // namespace

MomentVector::MomentVector(int order) : order_(order) {
  require_order(order);
  values_.assign(moment_count(order), 0.0);
}

MomentVector::MomentVector(int order, std::vector<double> values) : order_(order), values_(std::move(values)) {
  require_order(order);
  if (values_.size() != moment_count(order))
    throw Error(ErrorKind::dimension, "expected " + std::to_string(moment_count(order)) + " moments, got " +
                                          std::to_string(values_.size()));
}

MomentVector MomentVector::isotropic(int order, double rho) {
  MomentVector q(order);
  q.values_[0] = rho;
  return q;
}

double MomentVector::c(int l) const { return Closed{values_, order_}.c(l); }
double MomentVector::s(int l) const { return Closed{values_, order_}.s(l); }

MomentVector MomentVector::resized(int order) const {
  MomentVector out(order);
  const std::size_t n = std::min(out.size(), size());
  std::copy_n(values_.begin(), n, out.values_.begin());
  return out;
}

bool MomentVector::all_finite() const {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

DenseMatrix build_A_1d(int order) {
  require_order(order);
  const int n = order;
  DenseMatrix a(moment_count(n), moment_count(n));
  a(0, 2) = -1.0;        // A[1,3]
  a(2, 0) = -1.0 / 8.0;  // A[3,1]
  // 4x4 blocks anchored at 1-based index 2(N-j)-2, j = 0..N-2. Overlapping
  // entries of neighbouring blocks are zero in both, so only nonzeros are set.
  for (int j = 0; j <= n - 2; ++j) {
    const std::size_t k = static_cast<std::size_t>(2 * (n - j) - 3);
    a(k, k + 3) = -0.25;
    a(k + 1, k + 2) = 0.25;
    a(k + 2, k + 1) = 0.25;
    a(k + 3, k) = -0.25;
  }
  return a;
}

DenseMatrix build_A_2d(int order, double u) {
  DenseMatrix a = build_A_1d(order);
  for (std::size_t i = 0; i < a.rows(); ++i) a(i, i) = u;
  return a;
}

DenseMatrix build_B_2d(int order, double w) {
  require_order(order);
  const std::size_t m = moment_count(order);
  DenseMatrix b(m, m);
  b(0, 1) = 1.0;
  b(1, 0) = 1.0 / 8.0;
  for (std::size_t j = 2; j + 1 <= 2 * static_cast<std::size_t>(order); ++j) {  // 1-based j = 2..2N-1
    b(j - 1, j + 1) = 0.25;
    b(j + 1, j - 1) = 0.25;
  }
  for (std::size_t j = 0; j < m; ++j) b(j, j) = w - 1.5;
  return b;
}

void source_phi_shear(std::span<const double> q, double wx, const ModelParams& params, std::span<double> dq) {
  const int n = order_of(q.size());
  const Closed m{q, n};
  dq[0] = 0.0;
  for (int l = 1; l <= n; ++l) {
    const double half_l_wx = 0.5 * l * wx;
    const double decay = 4.0 * l * l * params.D_r;
    dq[c_index(l)] = -half_l_wx * (m.s(l - 1) + 2.0 * m.s(l) + m.s(l + 1)) - decay * m.c(l);
    dq[s_index(l)] = half_l_wx * (m.c(l - 1) + 2.0 * m.c(l) + m.c(l + 1)) - decay * m.s(l);
  }
}

void source_phi_2d(std::span<const double> q, const VelocityGradient2D& g, const ModelParams& params,
                   std::span<double> dq) {
  const int n = order_of(q.size());
  const Closed m{q, n};
  const double strain = g.wz - g.ux;
  const double shear = g.uz + g.wx;
  const double spin = g.uz - g.wx;
  dq[0] = 0.0;
  for (int l = 1; l <= n; ++l) {
    const double h = 0.5 * l;
    const double decay = 4.0 * l * l * params.D_r;
    dq[c_index(l)] = -h * strain * m.c(l - 1) + h * strain * m.c(l + 1)  //
                     - h * shear * m.s(l - 1) + l * spin * m.s(l) - h * shear * m.s(l + 1) - decay * m.c(l);
    dq[s_index(l)] = -h * strain * m.s(l - 1) + h * strain * m.s(l + 1)  //
                     + h * shear * m.c(l - 1) - l * spin * m.c(l) + h * shear * m.c(l + 1) - decay * m.s(l);
  }
}

MomentVector source_phi_shear(const MomentVector& q, double wx, const ModelParams& params) {
  MomentVector out(q.order());
  source_phi_shear(q.values(), wx, params, out.values());
  return out;
}

MomentVector source_phi_2d(const MomentVector& q, const VelocityGradient2D& g, const ModelParams& params) {
  MomentVector out(q.order());
  source_phi_2d(q.values(), g, params, out.values());
  return out;
}

namespace {

constexpr std::size_t kMaxMoments = 2 * 64 + 1;

template <class Rhs>
void rk4_in_place(std::span<double> q, double dt, Rhs&& rhs) {
  const std::size_t n = q.size();
  if (n > kMaxMoments) throw Error(ErrorKind::dimension, "moment order too large for RK4 scratch space");
  std::array<double, kMaxMoments> k1, k2, k3, k4, tmp;
  const auto view = [n](std::array<double, kMaxMoments>& a) { return std::span<double>(a.data(), n); };
  const auto cview = [n](const std::array<double, kMaxMoments>& a) { return std::span<const double>(a.data(), n); };

  rhs(std::span<const double>(q), view(k1));
  for (std::size_t i = 0; i < n; ++i) tmp[i] = q[i] + 0.5 * dt * k1[i];
  rhs(cview(tmp), view(k2));
  for (std::size_t i = 0; i < n; ++i) tmp[i] = q[i] + 0.5 * dt * k2[i];
  rhs(cview(tmp), view(k3));
  for (std::size_t i = 0; i < n; ++i) tmp[i] = q[i] + dt * k3[i];
  rhs(cview(tmp), view(k4));
  for (std::size_t i = 0; i < n; ++i) q[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
}

}  // namespace

void rk4_relax_shear(std::span<double> q, double wx, const ModelParams& params, double dt) {
  rk4_in_place(q, dt, [&](std::span<const double> x, std::span<double> d) { source_phi_shear(x, wx, params, d); });
}

void rk4_relax_2d(std::span<double> q, const VelocityGradient2D& g, const ModelParams& params, double dt) {
  rk4_in_place(q, dt, [&](std::span<const double> x, std::span<double> d) { source_phi_2d(x, g, params, d); });
}

double reconstruct_f(std::span<const double> q, double theta) {
  const int n = order_of(q.size());
  double f = q[0] / (2.0 * std::numbers::pi);
  for (int i = 1; i <= n; ++i)
    f += 2.0 / std::numbers::pi * (q[c_index(i)] * std::cos(2.0 * i * theta) + q[s_index(i)] * std::sin(2.0 * i * theta));
  return f;
}

MomentVector steady_state_moments(double wx_over_Dr, int order, const SteadyStateOptions& options) {
  require_order(order);
  if (!(options.tol > 0.0)) throw Error(ErrorKind::contract, "steady state tolerance must be > 0");
  if (!(options.rho > 0.0)) throw Error(ErrorKind::contract, "steady state density must be > 0");

  const ModelParams params{.D_r = 1.0, .delta = 0.0, .Re = 1.0};
  const double dt = 0.1 / (4.0 * order * order * params.D_r);
  MomentVector q = MomentVector::isotropic(order, options.rho);
  std::vector<double> rate(q.size());
  for (long step = 0; step <= options.max_steps; ++step) {
    source_phi_shear(q.values(), wx_over_Dr, params, rate);
    double max_rate = 0.0;
    for (double r : rate) max_rate = std::max(max_rate, std::abs(r));
    if (max_rate < options.tol) {
      q[0] = options.rho;
      return q;
    }
    rk4_relax_shear(q.values(), wx_over_Dr, params, dt);
  }
  throw Error(ErrorKind::no_steady_state, "relaxation did not reach tolerance within " +
                                              std::to_string(options.max_steps) + " steps");
}

double entropy(std::span<const double> q) {
  const int n = order_of(q.size());
  const double c0 = 0.5 * q[0];
  double eta = 0.5 * c0 * c0;
  for (int i = 1; i <= n; ++i) eta += q[c_index(i)] * q[c_index(i)] + q[s_index(i)] * q[s_index(i)];
  return eta;
}

double entropy_flux(std::span<const double> q) {
  const int n = order_of(q.size());
  const Closed m{q, n};
  double flux = 0.25 * m.s(1) * m.c(0);
  for (int i = 2; i <= n; ++i) flux += 0.25 * (m.c(i) * m.s(i - 1) + m.c(i - 1) * m.s(i));
  return flux;
}

}  // namespace rodsed
