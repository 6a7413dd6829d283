#include "rodsed/riemann.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <shared_mutex>

#include "rodsed/error.hpp"
#include "rodsed/jacobi.hpp"
#include "rodsed/moment_model.hpp"

namespace rodsed {

namespace {

// Scaling of the density row/column that symmetrizes the moment matrices:
// the pair (1,3)/(3,1) of A and (1,2)/(2,1) of B both have ratio 1/8.
const double kDensityScale = 1.0 / (2.0 * std::sqrt(2.0));

std::vector<double> resized(std::span<const double> q, std::size_t n) {
  std::vector<double> out(n, 0.0);
  std::copy_n(q.begin(), std::min(n, q.size()), out.begin());
  return out;
}

std::vector<double> difference(std::span<const double> right, std::span<const double> left) {
  std::vector<double> d(right.size());
  for (std::size_t k = 0; k < d.size(); ++k) d[k] = right[k] - left[k];
  return d;
}

void axpy(double a, std::span<const double> x, std::span<double> y) {
  for (std::size_t k = 0; k < x.size(); ++k) y[k] += a * x[k];
}

}  // namespace

HyperbolicOperator::HyperbolicOperator(int order, DenseMatrix matrix, std::vector<double> eigenvalues,
                                       DenseMatrix right, DenseMatrix right_inverse)
    : order_(order),
      matrix_(std::move(matrix)),
      eigenvalues_(std::move(eigenvalues)),
      right_(std::move(right)),
      right_inverse_(std::move(right_inverse)) {
  const std::size_t n = eigenvalues_.size();
  if (n != moment_count(order) || right_.rows() != n || right_inverse_.rows() != n || matrix_.rows() != n)
    throw Error(ErrorKind::dimension, "inconsistent operator dimensions");
  right_columns_.resize(n * n);
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t k = 0; k < n; ++k) right_columns_[p * n + k] = right_(k, p);
  for (double l : eigenvalues_) max_abs_ = std::max(max_abs_, std::abs(l));
}

void HyperbolicOperator::wave_strengths(std::span<const double> jump, std::span<double> alpha) const {
  if (jump.size() != size() || alpha.size() != size())
    throw Error(ErrorKind::dimension, "jump length does not match operator");
  right_inverse_.apply(jump, alpha);
}

double HyperbolicOperator::reconstruction_error() const {
  const std::size_t n = size();
  DenseMatrix scaled = right_;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t p = 0; p < n; ++p) scaled(i, p) *= eigenvalues_[p];
  return (scaled * right_inverse_ - matrix_).max_abs();
}

HyperbolicOperator eigendecompose(const DenseMatrix& a, int order) {
  const std::size_t n = moment_count(order);
  if (a.rows() != n || a.cols() != n) throw Error(ErrorKind::dimension, "matrix does not match moment order");

  std::vector<double> d(n, 1.0);
  d[0] = kDensityScale;
  DenseMatrix sym(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) sym(i, j) = d[i] * a(i, j) / d[j];

  SymmetricEigen eig = jacobi_eigen(sym);

  const double scale = std::max(a.max_abs(), 1.0);
  for (double& l : eig.values)
    if (std::abs(l) < 1e-14 * scale) l = 0.0;

  DenseMatrix right(n, n);
  DenseMatrix right_inverse(n, n);
  for (std::size_t p = 0; p < n; ++p) {
    double norm = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      right(k, p) = eig.vectors(k, p) / d[k];
      norm += right(k, p) * right(k, p);
    }
    norm = std::sqrt(norm);
    for (std::size_t k = 0; k < n; ++k) {
      right(k, p) /= norm;
      right_inverse(p, k) = norm * eig.vectors(k, p) * d[k];
    }
  }
  HyperbolicOperator op(order, a, std::move(eig.values), std::move(right), std::move(right_inverse));
  if (op.reconstruction_error() > 1e-12 * scale)
    throw Error(ErrorKind::decomposition, "eigendecomposition does not reproduce the matrix");
  return op;
}

namespace {

class OperatorCache {
 public:
  template <class Build>
  const HyperbolicOperator& get(int order, Build&& build) {
    {
      std::shared_lock lock(mutex_);
      if (auto it = cache_.find(order); it != cache_.end()) return *it->second;
    }
    auto op = std::make_unique<HyperbolicOperator>(build(order));
    std::unique_lock lock(mutex_);
    auto [it, inserted] = cache_.try_emplace(order, std::move(op));
    return *it->second;
  }

 private:
  std::shared_mutex mutex_;
  std::map<int, std::unique_ptr<HyperbolicOperator>> cache_;
};

}  // namespace

const HyperbolicOperator& moment_operator_x(int order) {
  static OperatorCache cache;
  return cache.get(order, [](int n) { return eigendecompose(build_A_1d(n), n); });
}

const HyperbolicOperator& moment_operator_z(int order) {
  static OperatorCache cache;
  return cache.get(order, [](int n) { return eigendecompose(build_B_2d(n, 1.5), n); });
}

void apply_moment_matrix_x(std::span<const double> x, std::span<double> y) {
  const int n = order_of(x.size());
  const auto c = [&](int l) { return l == 0 ? 0.5 * x[0] : (l > n ? 0.0 : x[c_index(l)]); };
  const auto s = [&](int l) { return (l == 0 || l > n) ? 0.0 : x[s_index(l)]; };
  y[0] = -s(1);
  for (int l = 1; l <= n; ++l) {
    y[c_index(l)] = 0.25 * (s(l - 1) - s(l + 1));
    y[s_index(l)] = 0.25 * (c(l + 1) - c(l - 1));
  }
}

Fluctuations fluctuations_uniform(std::span<const double> ql, std::span<const double> qr,
                                  const HyperbolicOperator& op) {
  const std::size_t n = op.size();
  if (ql.size() != n || qr.size() != n) throw Error(ErrorKind::dimension, "state order differs from operator order");
  std::vector<double> alpha(n);
  op.wave_strengths(difference(qr, ql), alpha);

  Fluctuations f{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0), {}};
  for (std::size_t p = 0; p < n; ++p) {
    const double lambda = op.eigenvalues()[p];
    Wave w{lambda, std::vector<double>(n)};
    for (std::size_t k = 0; k < n; ++k) w.vector[k] = alpha[p] * op.eigenvector(p)[k];
    axpy(std::min(lambda, 0.0), w.vector, f.aminus);
    axpy(std::max(lambda, 0.0), w.vector, f.aplus);
    f.waves.push_back(std::move(w));
  }
  return f;
}

Fluctuations fluctuations_interface(std::span<const double> q_low, std::span<const double> q_high, LowSide side,
                                    const HyperbolicOperator& low, const HyperbolicOperator& high) {
  if (q_low.size() != low.size() || q_high.size() != high.size())
    throw Error(ErrorKind::dimension, "state order differs from operator order");
  if (low.order() >= high.order())
    throw Error(ErrorKind::contract, "interface fluctuations need a strictly higher order on the high side");

  const std::size_t m = high.size();
  const std::vector<double> padded_low = resized(q_low, m);
  const bool low_left = side == LowSide::left;
  const std::vector<double> jump = low_left ? difference(q_high, padded_low) : difference(padded_low, q_high);

  std::vector<double> alpha(m);
  high.wave_strengths(jump, alpha);

  // Both fluctuations come from the high-order decomposition of the padded
  // jump; the one moving into the low-order cell is the conservation remainder.
  Fluctuations f{std::vector<double>(m, 0.0), std::vector<double>(m, 0.0), {}};
  std::vector<double>& into_high = low_left ? f.aplus : f.aminus;
  std::vector<double>& into_low = low_left ? f.aminus : f.aplus;
  for (std::size_t p = 0; p < m; ++p) {
    const double lambda = high.eigenvalues()[p];
    const double moving = low_left ? std::max(lambda, 0.0) : std::min(lambda, 0.0);
    axpy(moving * alpha[p], high.eigenvector(p), into_high);
  }
  apply_moment_matrix_x(jump, into_low);
  for (std::size_t k = 0; k < m; ++k) into_low[k] -= into_high[k];

  // Waves of the generalised Riemann problem.
  const std::size_t n = low.size();
  const std::vector<double> truncated_high = resized(q_high, n);
  const std::vector<double> low_jump = low_left ? difference(truncated_high, q_low) : difference(q_low, truncated_high);
  std::vector<double> low_alpha(n);
  low.wave_strengths(low_jump, low_alpha);

  auto push_waves = [&f, m](const HyperbolicOperator& op, std::span<const double> a, bool negative) {
    for (std::size_t p = 0; p < op.size(); ++p) {
      const double lambda = op.eigenvalues()[p];
      if (negative ? !(lambda < 0.0) : !(lambda > 0.0)) continue;
      Wave w{lambda, std::vector<double>(m, 0.0)};
      for (std::size_t k = 0; k < op.size(); ++k) w.vector[k] = a[p] * op.eigenvector(p)[k];
      f.waves.push_back(std::move(w));
    }
  };
  if (low_left) {
    push_waves(low, low_alpha, true);
    push_waves(high, alpha, false);
  } else {
    push_waves(high, alpha, true);
    push_waves(low, low_alpha, false);
  }
  return f;
}

std::vector<double> sample_generalised_rp(std::span<const double> ql, std::span<const double> qr, double x_over_t,
                                          const HyperbolicOperator& left_op, const HyperbolicOperator& right_op) {
  if (ql.size() != left_op.size() || qr.size() != right_op.size())
    throw Error(ErrorKind::dimension, "state order differs from operator order");

  if (x_over_t < 0.0) {
    // Left-moving waves of the left system, from the jump seen at the left order.
    const std::size_t n = left_op.size();
    const std::vector<double> jump = difference(resized(qr, n), ql);
    std::vector<double> alpha(n);
    left_op.wave_strengths(jump, alpha);
    std::vector<double> q(ql.begin(), ql.end());
    for (std::size_t p = 0; p < n; ++p) {
      const double lambda = left_op.eigenvalues()[p];
      if (lambda < 0.0 && lambda <= x_over_t) axpy(alpha[p], left_op.eigenvector(p), q);
    }
    return q;
  }

  const std::size_t m = right_op.size();
  const std::vector<double> jump = difference(qr, resized(ql, m));
  std::vector<double> alpha(m);
  right_op.wave_strengths(jump, alpha);
  std::vector<double> q(qr.begin(), qr.end());
  for (std::size_t p = 0; p < m; ++p) {
    const double lambda = right_op.eigenvalues()[p];
    if (lambda > 0.0 && lambda > x_over_t) axpy(-alpha[p], right_op.eigenvector(p), q);
  }
  return q;
}

Limiter parse_limiter(std::string_view name) {
  if (name == "none") return Limiter::none;
  if (name == "minmod") return Limiter::minmod;
  if (name == "superbee") return Limiter::superbee;
  if (name == "mc") return Limiter::mc;
  if (name == "vanleer" || name == "van_leer") return Limiter::van_leer;
  throw Error(ErrorKind::config, "unknown limiter '" + std::string(name) + "'");
}

std::string to_string(Limiter limiter) {
  switch (limiter) {
    case Limiter::none: return "none";
    case Limiter::minmod: return "minmod";
    case Limiter::superbee: return "superbee";
    case Limiter::mc: return "mc";
    case Limiter::van_leer: return "vanleer";
  }
  return "unknown";
}

double limiter_phi(Limiter limiter, double r) {
  switch (limiter) {
    case Limiter::none: return 1.0;
    case Limiter::minmod: return std::max(0.0, std::min(1.0, r));
    case Limiter::superbee: return std::max({0.0, std::min(1.0, 2.0 * r), std::min(2.0, r)});
    case Limiter::mc: return std::max(0.0, std::min({0.5 * (1.0 + r), 2.0, 2.0 * r}));
    case Limiter::van_leer: return (r + std::abs(r)) / (1.0 + std::abs(r));
  }
  return 0.0;
}

void limit_wave_strengths(std::span<const double> alpha_left, std::span<const double> alpha,
                          std::span<const double> alpha_right, std::span<const double> speeds, Limiter limiter,
                          std::span<double> limited) {
  for (std::size_t p = 0; p < alpha.size(); ++p) {
    if (speeds[p] == 0.0 || alpha[p] == 0.0) {
      limited[p] = alpha[p];
      continue;
    }
    const double upwind = speeds[p] > 0.0 ? alpha_left[p] : alpha_right[p];
    limited[p] = limiter_phi(limiter, upwind / alpha[p]) * alpha[p];
  }
}

}  // namespace rodsed
