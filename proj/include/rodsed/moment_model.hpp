#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "rodsed/dense.hpp"

namespace rodsed {

/// Non-dimensional model parameters (the elastic-stress coupling is fixed to zero).
struct ModelParams {
  double D_r = 0.0;    ///< rotational diffusion, >= 0
  double delta = 1.0;  ///< buoyancy coupling
  double Re = 1.0;     ///< Reynolds number, > 0

  void validate() const;
};

/// Cell-local discrete velocity derivatives.
struct VelocityGradient2D {
  double ux = 0.0;
  double uz = 0.0;
  double wx = 0.0;
  double wz = 0.0;
};

// Storage layout of a moment state of order N: (rho, C1, S1, ..., CN, SN).
constexpr std::size_t moment_count(int order) { return 2 * static_cast<std::size_t>(order) + 1; }
constexpr std::size_t c_index(int l) { return 2 * static_cast<std::size_t>(l) - 1; }
constexpr std::size_t s_index(int l) { return 2 * static_cast<std::size_t>(l); }
int order_of(std::size_t size);  // throws dimension error on even sizes

/// Moment state. C0 = rho/2, S0 = 0 and C_{N+1} = S_{N+1} = 0 are synthesized,
/// never stored.
class MomentVector {
 public:
  explicit MomentVector(int order);
  MomentVector(int order, std::vector<double> values);

  static MomentVector isotropic(int order, double rho);

  int order() const noexcept { return order_; }
  std::size_t size() const noexcept { return values_.size(); }

  double rho() const { return values_[0]; }
  double c(int l) const;
  double s(int l) const;
  void set_c(int l, double v) { values_.at(c_index(l)) = v; }
  void set_s(int l, double v) { values_.at(s_index(l)) = v; }

  double operator[](std::size_t i) const { return values_[i]; }
  double& operator[](std::size_t i) { return values_[i]; }
  std::span<const double> values() const noexcept { return values_; }
  std::span<double> values() noexcept { return values_; }

  /// Zero-padded (order > this->order()) or truncated copy.
  MomentVector resized(int order) const;

  bool all_finite() const;

  friend bool operator==(const MomentVector&, const MomentVector&) = default;

 private:
  int order_;
  std::vector<double> values_;
};

// Coefficient matrices. Indices in comments are 1-based; storage is 0-based.
DenseMatrix build_A_1d(int order);
DenseMatrix build_A_2d(int order, double u);
DenseMatrix build_B_2d(int order, double w);

// Relaxation right-hand sides (all non-transport terms). dq has q's size.
void source_phi_shear(std::span<const double> q, double wx, const ModelParams& params, std::span<double> dq);
void source_phi_2d(std::span<const double> q, const VelocityGradient2D& g, const ModelParams& params,
                   std::span<double> dq);
MomentVector source_phi_shear(const MomentVector& q, double wx, const ModelParams& params);
MomentVector source_phi_2d(const MomentVector& q, const VelocityGradient2D& g, const ModelParams& params);

// One classical RK4 step of dq/dt = phi(q) in place, with frozen gradients.
void rk4_relax_shear(std::span<double> q, double wx, const ModelParams& params, double dt);
void rk4_relax_2d(std::span<double> q, const VelocityGradient2D& g, const ModelParams& params, double dt);

/// Truncated Fourier series of the orientation density.
double reconstruct_f(std::span<const double> q, double theta);
inline double reconstruct_f(const MomentVector& q, double theta) { return reconstruct_f(q.values(), theta); }

struct SteadyStateOptions {
  double rho = 1.0;
  double tol = 1e-12;
  long max_steps = 10'000'000;
};

/// Equilibrium of the shear relaxation ODE at a fixed velocity gradient,
/// started from the isotropic state. Only the ratio wx / D_r matters, so D_r = 1.
MomentVector steady_state_moments(double wx_over_Dr, int order, const SteadyStateOptions& options = {});

double entropy(std::span<const double> q);
double entropy_flux(std::span<const double> q);
inline double entropy(const MomentVector& q) { return entropy(q.values()); }
inline double entropy_flux(const MomentVector& q) { return entropy_flux(q.values()); }

}  // namespace rodsed
