#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <tuple>
#include <vector>

#include "critpts/dataset.hpp"
#include "critpts/error.hpp"
#include "critpts/index_set.hpp"
#include "critpts/io.hpp"
#include "critpts/separability.hpp"

namespace critpts {

struct SolverConfig {
  double tolerance = 1e-8;
  std::size_t max_iterations = 1'000'000;
  std::uint64_t seed = 0;

  void validate() const {
    if (!(tolerance > 0)) throw Error(ErrorCode::InvalidParams, "tolerance must be positive");
    if (max_iterations == 0) throw Error(ErrorCode::InvalidParams, "max_iterations must be positive");
  }
};

/// Hard-margin optimum (w, b) of  min |w|^2  s.t.  y_i (w.x_i + b) >= 1.
struct SvmSolution {
  std::vector<double> w;
  double b = 0;
  IndexSet support_indices;
  double objective = 0;

  double score(std::span<const double> x) const {
    if (x.size() != w.size())
      throw Error(ErrorCode::DimensionMismatch,
                  "point has dimension " + std::to_string(x.size()) + ", classifier " + std::to_string(w.size()));
    double s = b;
    for (std::size_t k = 0; k < w.size(); ++k) s += w[k] * x[k];
    return s;
  }
};

namespace detail {

struct ActiveSetResult {
  Eigen::VectorXd w;
  double b = 0;
  std::vector<Index> working;
  Eigen::VectorXd multipliers;
};

/// Minimum-norm w with w.(x_i - x_r) = y_i - y_r over the working set, r = W[0].
inline std::pair<Eigen::VectorXd, double> equality_optimum(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                                                           const std::vector<Index>& W) {
  const Index r = W.front();
  Eigen::VectorXd w = Eigen::VectorXd::Zero(X.cols());
  if (W.size() > 1) {
    Eigen::MatrixXd D(W.size() - 1, X.cols());
    Eigen::VectorXd rhs(W.size() - 1);
    for (std::size_t k = 1; k < W.size(); ++k) {
      D.row(k - 1) = X.row(W[k]) - X.row(r);
      rhs(k - 1) = y(W[k]) - y(r);
    }
    w = D.completeOrthogonalDecomposition().solve(rhs);
  }
  return {w, y(r) - X.row(r).dot(w)};
}

/// Lagrange multipliers mu with sum_i mu_i y_i (x_i, 1) = (w, 0) over W.
inline Eigen::VectorXd working_multipliers(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                                           const std::vector<Index>& W, const Eigen::VectorXd& w) {
  Eigen::MatrixXd G(X.cols() + 1, W.size());
  for (std::size_t k = 0; k < W.size(); ++k) {
    G.col(k).head(X.cols()) = y(W[k]) * X.row(W[k]).transpose();
    G(X.cols(), k) = y(W[k]);
  }
  Eigen::VectorXd rhs(X.cols() + 1);
  rhs.head(X.cols()) = w;
  rhs(X.cols()) = 0;
  return G.colPivHouseholderQr().solve(rhs);
}

/// Primal active-set method on rows of X with labels y in {-1, +1}, started from
/// a strictly feasible (w0, b0).
inline ActiveSetResult active_set_svm(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, Eigen::VectorXd w,
                                      double b, const SolverConfig& config) {
  const std::size_t m = static_cast<std::size_t>(X.rows());
  std::vector<Index> W;
  std::vector<bool> in_w(m, false);
  auto slack = [&](Index i, const Eigen::VectorXd& ww, double bb) { return y(i) * (X.row(i).dot(ww) + bb) - 1; };

  double scale = 1;
  for (Index i = 0; i < m; ++i) scale = std::max(scale, X.row(i).cwiseAbs().maxCoeff());

  for (std::size_t iter = 0; iter < config.max_iterations; ++iter) {
    Eigen::VectorXd target_w;
    double target_b;
    if (W.empty()) {
      target_w = Eigen::VectorXd::Zero(X.cols());
      target_b = b;
    } else {
      std::tie(target_w, target_b) = equality_optimum(X, y, W);
    }
    Eigen::VectorXd pw = target_w - w;
    double pb = target_b - b;
    const double step_norm = std::max(pw.lpNorm<Eigen::Infinity>(), std::abs(pb));
    const double z_norm = std::max({1.0, w.lpNorm<Eigen::Infinity>(), std::abs(b)});

    if (step_norm <= 1e-13 * z_norm) {
      if (W.empty()) return {w, b, W, Eigen::VectorXd()};
      Eigen::VectorXd mu = working_multipliers(X, y, W, w);
      Eigen::Index worst = 0;
      double lowest = mu.minCoeff(&worst);
      if (lowest >= -config.tolerance * std::max(1.0, mu.cwiseAbs().maxCoeff())) return {w, b, W, mu};
      in_w[W[worst]] = false;
      W.erase(W.begin() + worst);
      continue;
    }

    double alpha = 1;
    std::optional<Index> blocking;
    for (Index i = 0; i < m; ++i) {
      if (in_w[i]) continue;
      double rate = y(i) * (X.row(i).dot(pw) + pb);
      if (rate >= -1e-12 * step_norm * scale) continue;
      double limit = std::max(0.0, slack(i, w, b)) / -rate;
      if (limit < alpha) {
        alpha = limit;
        blocking = i;
      }
    }
    w += alpha * pw;
    b += alpha * pb;
    if (blocking) {
      W.push_back(*blocking);
      in_w[*blocking] = true;
    }
  }
  throw Error(ErrorCode::NoConvergence, "active-set SVM exceeded " + std::to_string(config.max_iterations) +
                                            " iterations");
}

/// Points whose margin equals one within tolerance.
inline IndexSet margin_points(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const Eigen::VectorXd& w, double b,
                              double tolerance) {
  std::vector<Index> out;
  for (Index i = 0; i < static_cast<Index>(X.rows()); ++i)
    if (std::abs(y(i) * (X.row(i).dot(w) + b) - 1) <= tolerance) out.push_back(i);
  return IndexSet(std::move(out));
}

inline Eigen::MatrixXd to_matrix(const std::vector<Point>& pts, std::size_t dim) {
  Eigen::MatrixXd X(pts.size(), dim);
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t k = 0; k < dim; ++k) X(i, k) = to_double(pts[i][k]);
  return X;
}

inline Eigen::VectorXd label_vector(const std::vector<Label>& labels) {
  Eigen::VectorXd y(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) y(i) = sign_of(labels[i]);
  return y;
}

}  // namespace detail

/// Trains on feature rows X (one per point) given a strictly feasible start.
inline SvmSolution train_hard_svm_features(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                                           const Eigen::VectorXd& w0, double b0, const SolverConfig& config) {
  config.validate();
  for (Index i = 0; i < static_cast<Index>(X.rows()); ++i)
    if (y(i) * (X.row(i).dot(w0) + b0) < 1 - config.tolerance)
      throw Error(ErrorCode::InvalidParams, "starting point violates the margin at point " + std::to_string(i));

  auto res = detail::active_set_svm(X, y, w0, b0, config);
  SvmSolution sol;
  sol.w.assign(res.w.data(), res.w.data() + res.w.size());
  sol.b = res.b;
  sol.objective = res.w.squaredNorm();
  sol.support_indices = detail::margin_points(X, y, res.w, res.b, config.tolerance);
  return sol;
}

/// Unique hard-margin SVM for strictly separable data. Separability is checked
/// exactly first; a one-class dataset gives w = 0 and b = +/-1.
inline SvmSolution train_hard_svm(const LabeledDataset& data, const SolverConfig& config = {}) {
  config.validate();
  const auto pos = data.select(data.positives());
  const auto neg = data.select(data.negatives());
  auto sep = check_separability(pos, neg);
  if (!sep.separable()) throw Error(ErrorCode::NotSeparable, "training data is not strictly separable");

  const Eigen::MatrixXd X = detail::to_matrix(data.points(), data.dim());
  const Eigen::VectorXd y = detail::label_vector(data.labels());
  if (pos.empty() || neg.empty()) {
    SvmSolution sol;
    sol.w.assign(data.dim(), 0.0);
    sol.b = pos.empty() ? -1.0 : 1.0;
    sol.support_indices = data.all();
    return sol;
  }

  const auto& h = sep.separator();
  Eigen::VectorXd w0(data.dim());
  for (std::size_t k = 0; k < data.dim(); ++k) w0(k) = 2 * to_double(h.direction[k]);
  return train_hard_svm_features(X, y, w0, -2 * to_double(h.offset), config);
}

/// sign(w.x + b) with sign(0) = +1.
inline Label classify(const SvmSolution& sol, std::span<const double> x) {
  return sol.score(x) >= 0 ? Label::Positive : Label::Negative;
}

inline Label classify(const SvmSolution& sol, const Point& x) {
  auto v = to_doubles(x);
  return classify(sol, std::span<const double>(v));
}

inline bool solutions_equal(const SvmSolution& a, const SvmSolution& b, double tol) {
  if (a.w.size() != b.w.size()) return false;
  for (std::size_t k = 0; k < a.w.size(); ++k)
    if (std::abs(a.w[k] - b.w[k]) > tol) return false;
  return std::abs(a.b - b.b) <= tol;
}

inline json to_json(const SvmSolution& sol) {
  return json{{"w", sol.w}, {"b", sol.b}, {"support", to_json(sol.support_indices)}, {"objective", sol.objective}};
}

}  // namespace critpts
