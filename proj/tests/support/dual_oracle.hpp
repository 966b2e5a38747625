#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <stdexcept>

// Hard-margin dual by sequential minimal optimisation with maximal violating
// pairs:  max sum(a) - 1/2 a'Qa  s.t.  y'a = 0, a >= 0,  Q_ij = y_i y_j K_ij.

namespace critpts::testing {

struct DualSolution {
  Eigen::VectorXd alpha;
  double b = 0;
  double norm_sq = 0;  // |w|^2 = a'Qa
};

inline DualSolution smo_dual(const Eigen::MatrixXd& K, const Eigen::VectorXd& y, double eps = 1e-11,
                             long max_iter = 50'000'000) {
  const Eigen::Index m = K.rows();
  Eigen::MatrixXd Q = (y * y.transpose()).cwiseProduct(K);
  Eigen::VectorXd a = Eigen::VectorXd::Zero(m);
  Eigen::VectorXd G = -Eigen::VectorXd::Ones(m);

  for (long iter = 0; iter < max_iter; ++iter) {
    Eigen::Index i = -1, j = -1;
    double up = -std::numeric_limits<double>::infinity(), low = std::numeric_limits<double>::infinity();
    for (Eigen::Index t = 0; t < m; ++t) {
      double v = -y(t) * G(t);
      if ((y(t) > 0 || a(t) > 0) && v > up) up = v, i = t;
      if ((y(t) < 0 || a(t) > 0) && v < low) low = v, j = t;
    }
    if (i < 0 || j < 0 || up - low < eps) break;

    const double ai = a(i), aj = a(j);
    if (y(i) != y(j)) {
      double quad = std::max(Q(i, i) + Q(j, j) + 2 * Q(i, j), 1e-300);
      double delta = (-G(i) - G(j)) / quad;
      double diff = ai - aj;
      a(i) += delta;
      a(j) += delta;
      if (diff > 0 && a(j) < 0) a(j) = 0, a(i) = diff;
      else if (diff <= 0 && a(i) < 0) a(i) = 0, a(j) = -diff;
    } else {
      double quad = std::max(Q(i, i) + Q(j, j) - 2 * Q(i, j), 1e-300);
      double delta = (G(i) - G(j)) / quad;
      double sum = ai + aj;
      a(i) -= delta;
      a(j) += delta;
      if (a(j) < 0) a(j) = 0, a(i) = sum;
      if (a(i) < 0) a(i) = 0, a(j) = sum;
    }
    G += Q.col(i) * (a(i) - ai) + Q.col(j) * (a(j) - aj);
  }

  DualSolution out;
  out.alpha = a;
  out.norm_sq = a.dot(Q * a);
  double total = 0;
  int count = 0;
  Eigen::VectorXd f = K * a.cwiseProduct(y);
  for (Eigen::Index t = 0; t < m; ++t)
    if (a(t) > 1e-9) total += y(t) - f(t), ++count;
  out.b = count > 0 ? total / count : 0;
  return out;
}

}  // namespace critpts::testing
