#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rodsed/dense.hpp"

namespace rodsed {

/// Eigendecomposition A = R diag(lambda) R^{-1} of a moment coefficient matrix.
/// Immutable after construction.
class HyperbolicOperator {
 public:
  HyperbolicOperator(int order, DenseMatrix matrix, std::vector<double> eigenvalues, DenseMatrix right,
                     DenseMatrix right_inverse);

  int order() const noexcept { return order_; }
  std::size_t size() const noexcept { return eigenvalues_.size(); }
  const DenseMatrix& matrix() const noexcept { return matrix_; }
  std::span<const double> eigenvalues() const noexcept { return eigenvalues_; }
  const DenseMatrix& right() const noexcept { return right_; }
  const DenseMatrix& right_inverse() const noexcept { return right_inverse_; }
  double max_abs_eigenvalue() const noexcept { return max_abs_; }

  // Column p of R, stored contiguously.
  std::span<const double> eigenvector(std::size_t p) const { return {right_columns_.data() + p * size(), size()}; }

  /// alpha = R^{-1} jump
  void wave_strengths(std::span<const double> jump, std::span<double> alpha) const;

  /// max_{ij} |R diag(lambda) R^{-1} - A|
  double reconstruction_error() const;

 private:
  int order_;
  DenseMatrix matrix_;
  std::vector<double> eigenvalues_;
  DenseMatrix right_;
  DenseMatrix right_inverse_;
  std::vector<double> right_columns_;
  double max_abs_ = 0.0;
};

/// Decomposes a moment matrix whose only asymmetry sits in the (rho, x)
/// coupling pair with ratio 1/8. The matrix is symmetrized with
/// D = diag(1/(2 sqrt 2), 1, ..., 1) and handed to cyclic Jacobi.
HyperbolicOperator eigendecompose(const DenseMatrix& a, int order);

/// Cached decomposition of the constant 1D matrix (also the velocity-free part
/// of the 2D x-matrix).
const HyperbolicOperator& moment_operator_x(int order);
/// Cached decomposition of the velocity-free part of the 2D z-matrix, i.e.
/// build_B_2d(order, 3/2). Eigenvalues shift by (w - 3/2) at use sites.
const HyperbolicOperator& moment_operator_z(int order);

/// y = A x for the constant 1D moment matrix of order order_of(x.size()), in O(N).
void apply_moment_matrix_x(std::span<const double> x, std::span<double> y);

struct Wave {
  double speed = 0.0;
  std::vector<double> vector;
};

struct Fluctuations {
  std::vector<double> aminus;
  std::vector<double> aplus;
  std::vector<Wave> waves;
};

/// Standard eigen-splitting of the jump qr - ql (equal orders).
Fluctuations fluctuations_uniform(std::span<const double> ql, std::span<const double> qr, const HyperbolicOperator& op);

enum class LowSide { left, right };

/// Conservative fluctuations between states of different order. Both
/// fluctuations have the high order's length; the caller applies only the
/// leading components on the low-order side. The waves returned are the
/// moving waves of the generalised Riemann problem (low-order waves moving
/// into the low-order cell, high-order waves moving into the high-order cell),
/// zero-padded to the high order.
Fluctuations fluctuations_interface(std::span<const double> q_low, std::span<const double> q_high, LowSide side,
                                    const HyperbolicOperator& low, const HyperbolicOperator& high);

/// Piecewise-constant solution of the (generalised) Riemann problem at x/t.
/// Returns a state of the left order for x/t < 0 and of the right order
/// otherwise. Exactly on a wave speed the right limit is returned.
std::vector<double> sample_generalised_rp(std::span<const double> ql, std::span<const double> qr, double x_over_t,
                                          const HyperbolicOperator& left_op, const HyperbolicOperator& right_op);

enum class Limiter { none, minmod, superbee, mc, van_leer };

Limiter parse_limiter(std::string_view name);
std::string to_string(Limiter limiter);

/// phi(ratio); `none` is the unlimited second-order correction (phi = 1).
double limiter_phi(Limiter limiter, double ratio);

/// Limits wave strengths family by family. For a wave with positive speed the
/// upwind comparison wave is the one at the left neighbour interface, for a
/// negative speed the right one. Waves of one family share an eigenvector, so
/// the projection ratio reduces to a ratio of strengths. A zero wave gets ratio 0.
void limit_wave_strengths(std::span<const double> alpha_left, std::span<const double> alpha,
                          std::span<const double> alpha_right, std::span<const double> speeds, Limiter limiter,
                          std::span<double> limited);

}  // namespace rodsed
