#pragma once

// Exact cell averages of the constant-coefficient linear system
// dt Q + A dx Q = 0 with Q(x, 0) = v sin(k x), computed with an Eigen
// eigensolver that is independent of the library's Jacobi decomposition.

#include <Eigen/Dense>
#include <cmath>
#include <vector>

namespace oracle {

class LinearSineSolution {
 public:
  LinearSineSolution(const Eigen::MatrixXd& a, const Eigen::VectorXd& v, double k) : k_(k) {
    Eigen::EigenSolver<Eigen::MatrixXd> es(a);
    lambda_ = es.eigenvalues().real();
    r_ = es.eigenvectors().real();
    alpha_ = r_.partialPivLu().solve(v);
  }

  // Average over [a, b] at time t.
  Eigen::VectorXd cell_average(double a, double b, double t) const {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(r_.rows());
    for (int p = 0; p < r_.cols(); ++p) {
      const double c = lambda_(p) * t;
      const double avg = (std::cos(k_ * (a - c)) - std::cos(k_ * (b - c))) / (k_ * (b - a));
      out += alpha_(p) * avg * r_.col(p);
    }
    return out;
  }

 private:
  double k_;
  Eigen::VectorXd lambda_;
  Eigen::MatrixXd r_;
  Eigen::VectorXd alpha_;
};

}  // namespace oracle
