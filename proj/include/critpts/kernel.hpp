#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "critpts/dataset.hpp"
#include "critpts/error.hpp"
#include "critpts/index_set.hpp"
#include "critpts/io.hpp"
#include "critpts/separability.hpp"
#include "critpts/simplex.hpp"
#include "critpts/svm.hpp"

namespace critpts {

struct KernelSpec {
  enum class Kind { Linear, Polynomial, Rbf };

  Kind kind = Kind::Linear;
  int degree = 2;
  double coef0 = 0;
  double gamma = 1;

  static KernelSpec linear() { return {}; }
  static KernelSpec polynomial(int degree, double coef0 = 0) { return {Kind::Polynomial, degree, coef0, 1}; }
  static KernelSpec rbf(double gamma) { return {Kind::Rbf, 2, 0, gamma}; }

  void validate() const {
    if (kind == Kind::Polynomial && degree < 1) throw Error(ErrorCode::InvalidParams, "polynomial degree must be >= 1");
    if (kind == Kind::Rbf && !(gamma > 0)) throw Error(ErrorCode::InvalidParams, "rbf gamma must be positive");
  }

  double operator()(std::span<const double> a, std::span<const double> b) const {
    switch (kind) {
      case Kind::Linear:
        return dot_product(a, b);
      case Kind::Polynomial:
        return std::pow(dot_product(a, b) + coef0, degree);
      case Kind::Rbf: {
        double d2 = 0;
        for (std::size_t k = 0; k < a.size(); ++k) d2 += (a[k] - b[k]) * (a[k] - b[k]);
        return std::exp(-gamma * d2);
      }
    }
    return 0;
  }

  friend bool operator==(const KernelSpec&, const KernelSpec&) = default;

 private:
  static double dot_product(std::span<const double> a, std::span<const double> b) {
    double s = 0;
    for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
    return s;
  }
};

/// "linear", "poly:D", "poly:D:C" or "rbf:G". "poly:D" means (x.x' + 1)^D.
inline KernelSpec parse_kernel_spec(const std::string& text) {
  auto fail = [&] { return Error(ErrorCode::InvalidParams, "unknown kernel '" + text + "'"); };
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    auto colon = text.find(':', start);
    parts.push_back(text.substr(start, colon - start));
    if (colon == std::string::npos) break;
    start = colon + 1;
  }
  try {
    KernelSpec spec;
    if (parts[0] == "linear" && parts.size() == 1) {
      spec = KernelSpec::linear();
    } else if (parts[0] == "poly" && (parts.size() == 2 || parts.size() == 3)) {
      std::size_t used = 0;
      int degree = std::stoi(parts[1], &used);
      if (used != parts[1].size()) throw fail();
      spec = KernelSpec::polynomial(degree, parts.size() == 3 ? to_double(parse_rational(parts[2])) : 1.0);
    } else if (parts[0] == "rbf" && parts.size() == 2) {
      spec = KernelSpec::rbf(to_double(parse_rational(parts[1])));
    } else {
      throw fail();
    }
    spec.validate();
    return spec;
  } catch (const std::logic_error&) {
    throw fail();
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ParseError) throw fail();
    throw;
  }
}

inline json to_json(const KernelSpec& spec) {
  switch (spec.kind) {
    case KernelSpec::Kind::Linear:
      return json{{"kernel", "linear"}};
    case KernelSpec::Kind::Polynomial:
      return json{{"kernel", "poly"}, {"degree", spec.degree}, {"coef0", spec.coef0}};
    case KernelSpec::Kind::Rbf:
      return json{{"kernel", "rbf"}, {"gamma", spec.gamma}};
  }
  return {};
}

inline KernelSpec kernel_spec_from_json(const json& j) {
  try {
    const std::string kind = j.at("kernel").get<std::string>();
    KernelSpec spec;
    if (kind == "linear") {
      spec = KernelSpec::linear();
    } else if (kind == "poly") {
      spec = KernelSpec::polynomial(j.at("degree").get<int>(), j.value("coef0", 0.0));
    } else if (kind == "rbf") {
      spec = KernelSpec::rbf(j.at("gamma").get<double>());
    } else {
      throw Error(ErrorCode::InvalidParams, "unknown kernel '" + kind + "'");
    }
    spec.validate();
    return spec;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("kernel spec: ") + e.what());
  }
}

inline Eigen::MatrixXd gram(const KernelSpec& spec, std::span<const Point> points) {
  spec.validate();
  if (points.empty()) throw Error(ErrorCode::InvalidParams, "gram matrix of no points");
  check_dimension(points, points.front().size());
  std::vector<std::vector<double>> xs;
  for (const auto& p : points) xs.push_back(to_doubles(p));
  const auto m = static_cast<Eigen::Index>(points.size());
  Eigen::MatrixXd K(m, m);
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = 0; j <= i; ++j) K(i, j) = K(j, i) = spec(xs[i], xs[j]);
  return K;
}

namespace detail {

/// Rows Phi with Phi Phi^T = K, from the eigenvectors of K whose eigenvalues
/// exceed a relative cutoff.
struct FeatureMap {
  Eigen::MatrixXd phi;
  Eigen::MatrixXd basis;  // retained eigenvectors
  Eigen::VectorXd values;
};

inline FeatureMap empirical_features(const Eigen::MatrixXd& K) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(K);
  const Eigen::VectorXd& lambda = eig.eigenvalues();
  const double top = std::max(lambda.cwiseAbs().maxCoeff(), 0.0);
  std::vector<Eigen::Index> keep;
  for (Eigen::Index k = lambda.size() - 1; k >= 0; --k)
    if (top > 0 && lambda(k) > 1e-10 * top) keep.push_back(k);
  FeatureMap f;
  f.basis.resize(K.rows(), static_cast<Eigen::Index>(keep.size()));
  f.values.resize(static_cast<Eigen::Index>(keep.size()));
  for (std::size_t c = 0; c < keep.size(); ++c) {
    f.basis.col(static_cast<Eigen::Index>(c)) = eig.eigenvectors().col(keep[c]);
    f.values(static_cast<Eigen::Index>(c)) = lambda(keep[c]);
  }
  f.phi = f.basis * f.values.cwiseSqrt().asDiagonal();
  return f;
}

struct FeatureSeparation {
  bool separable = false;
  Eigen::VectorXd w;
  double b = 0;
};

/// Margin-one LP y_i (phi_i . w + b) >= 1 in floating point. A claimed
/// solution is accepted only if it strictly separates when re-evaluated.
inline FeatureSeparation separate_features(const Eigen::MatrixXd& phi, const Eigen::VectorXd& y) {
  const auto m = static_cast<std::size_t>(phi.rows()), r = static_cast<std::size_t>(phi.cols());
  lp::Matrix<double> A(m, r + 1);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t k = 0; k < r; ++k) A(i, k) = y(i) * phi(i, k);
    A(i, r) = y(i);
  }
  auto res = lp::solve_inequalities(A, std::vector<double>(m, 1.0), 1e-9);
  FeatureSeparation out;
  if (!res.feasible) return out;
  out.w = Eigen::Map<const Eigen::VectorXd>(res.z.data(), r);
  out.b = res.z[r];
  double worst = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < m; ++i) worst = std::min(worst, y(i) * (phi.row(i).dot(out.w) + out.b));
  if (worst > 0.5) {
    out.separable = true;
    out.w *= 2 / worst;
    out.b *= 2 / worst;
  }
  return out;
}

inline Eigen::VectorXd signed_labels(std::size_t positives, std::size_t negatives) {
  Eigen::VectorXd y(static_cast<Eigen::Index>(positives + negatives));
  for (std::size_t i = 0; i < positives + negatives; ++i) y(i) = i < positives ? 1.0 : -1.0;
  return y;
}

inline bool separable_in_feature_space(const Eigen::MatrixXd& K, const Eigen::VectorXd& y) {
  if ((y.array() > 0).all() || (y.array() < 0).all()) return true;
  return separate_features(empirical_features(K).phi, y).separable;
}

}  // namespace detail

/// Feasibility of y_i (sum_j a_j K(x_j, x_i) + b) >= 1 over the points of
/// both sets, decided in floating point.
inline bool kernel_separability(std::span<const Point> pos, std::span<const Point> neg, const KernelSpec& spec,
                                const SolverConfig& config = {}) {
  config.validate();
  detail::common_dimension(pos, neg);
  if (pos.empty() || neg.empty()) return true;
  std::vector<Point> all(pos.begin(), pos.end());
  all.insert(all.end(), neg.begin(), neg.end());
  return detail::separable_in_feature_space(gram(spec, all), detail::signed_labels(pos.size(), neg.size()));
}

/// h(x) = sign(sum_j alphas_j K(anchors_j, x) + b); the alphas carry the label signs.
struct KernelClassifier {
  std::vector<double> alphas;
  double b = 0;
  std::vector<Point> anchors;
  KernelSpec spec;
  IndexSet support_indices;
  double objective = 0;

  double decision(const Point& x) const {
    if (!anchors.empty() && x.size() != anchors.front().size())
      throw Error(ErrorCode::DimensionMismatch, "query point dimension");
    auto xv = to_doubles(x);
    double s = b;
    for (std::size_t j = 0; j < anchors.size(); ++j) s += alphas[j] * spec(to_doubles(anchors[j]), xv);
    return s;
  }

  Label classify(const Point& x) const { return decision(x) >= 0 ? Label::Positive : Label::Negative; }

  /// sum_j alphas_j x_j, the explicit weight of a linear-kernel classifier.
  std::vector<double> linear_weight() const {
    std::vector<double> w(anchors.empty() ? 0 : anchors.front().size(), 0.0);
    for (std::size_t j = 0; j < anchors.size(); ++j)
      for (std::size_t k = 0; k < w.size(); ++k) w[k] += alphas[j] * to_double(anchors[j][k]);
    return w;
  }
};

inline KernelClassifier train_kernel_svm(const LabeledDataset& data, const KernelSpec& spec,
                                         const SolverConfig& config = {}) {
  config.validate();
  spec.validate();
  KernelClassifier out;
  out.anchors = data.points();
  out.spec = spec;
  out.alphas.assign(data.size(), 0.0);

  const Eigen::VectorXd y = detail::label_vector(data.labels());
  if (data.positives().empty() || data.negatives().empty()) {
    out.b = data.positives().empty() ? -1.0 : 1.0;
    out.support_indices = data.all();
    return out;
  }

  const auto features = detail::empirical_features(gram(spec, data.points()));
  auto start = detail::separate_features(features.phi, y);
  if (!start.separable)
    throw Error(ErrorCode::NotSeparableInFeatureSpace, "training data is not separable under the kernel");

  auto sol = train_hard_svm_features(features.phi, y, start.w, start.b, config);
  Eigen::Map<const Eigen::VectorXd> w(sol.w.data(), static_cast<Eigen::Index>(sol.w.size()));
  Eigen::VectorXd alpha = features.basis * features.values.cwiseSqrt().cwiseInverse().asDiagonal() * w;
  out.alphas.assign(alpha.data(), alpha.data() + alpha.size());
  out.b = sol.b;
  out.support_indices = sol.support_indices;
  out.objective = sol.objective;
  return out;
}

/// max(RKHS distance between the two decision functions without offsets, |b_a - b_b|).
/// Anchors shared by both classifiers are merged before the norm is taken.
inline double kernel_classifier_distance(const KernelClassifier& a, const KernelClassifier& b) {
  if (!(a.spec == b.spec)) throw Error(ErrorCode::InvalidParams, "classifiers use different kernels");
  std::map<Point, double> merged;
  for (std::size_t j = 0; j < a.anchors.size(); ++j) merged[a.anchors[j]] += a.alphas[j];
  for (std::size_t j = 0; j < b.anchors.size(); ++j) merged[b.anchors[j]] -= b.alphas[j];
  std::vector<Point> pts;
  Eigen::VectorXd gamma(static_cast<Eigen::Index>(merged.size()));
  for (const auto& [p, v] : merged) {
    gamma(static_cast<Eigen::Index>(pts.size())) = v;
    pts.push_back(p);
  }
  double norm_sq = pts.empty() ? 0.0 : gamma.dot(gram(a.spec, pts) * gamma);
  return std::max(std::sqrt(std::max(norm_sq, 0.0)), std::abs(a.b - b.b));
}

inline bool kernel_classifiers_equal(const KernelClassifier& a, const KernelClassifier& b, double tol) {
  return kernel_classifier_distance(a, b) <= tol;
}

/// Separability backend in the kernel's feature space over a fixed universe.
class KernelBackend {
 public:
  KernelBackend(std::vector<Point> points, KernelSpec spec, SolverConfig config = {})
      : points_(std::move(points)), spec_(spec), config_(config) {
    config_.validate();
    K_ = points_.empty() ? Eigen::MatrixXd() : gram(spec_, points_);
  }
  KernelBackend(const LabeledDataset& data, KernelSpec spec, SolverConfig config = {})
      : KernelBackend(data.points(), spec, config) {}

  std::size_t size() const { return points_.size(); }
  const KernelSpec& spec() const { return spec_; }

  bool separable(const IndexSet& pos, const IndexSet& neg) const {
    pos.check_range(size());
    neg.check_range(size());
    if (pos.empty() || neg.empty()) return true;
    if (!(pos & neg).empty()) return false;
    std::vector<Index> idx(pos.begin(), pos.end());
    idx.insert(idx.end(), neg.begin(), neg.end());
    Eigen::MatrixXd sub(idx.size(), idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i)
      for (std::size_t j = 0; j < idx.size(); ++j) sub(i, j) = K_(idx[i], idx[j]);
    return detail::separable_in_feature_space(sub, detail::signed_labels(pos.size(), neg.size()));
  }

 private:
  std::vector<Point> points_;
  KernelSpec spec_;
  SolverConfig config_;
  Eigen::MatrixXd K_;
};

inline IndexSet kernel_critical_points(const LabeledDataset& S, const IndexSet& a_plus, const KernelSpec& spec,
                                       const SolverConfig& config = {}) {
  KernelBackend backend(S, spec, config);
  a_plus.check_range(S.size());
  if (!backend.separable(a_plus, S.all() - a_plus))
    throw Error(ErrorCode::NotSeparableInFeatureSpace, "A+ and its complement are not separable under the kernel");
  return critical_points_with(backend, a_plus);
}

inline json to_json(const KernelClassifier& h) {
  json anchors = json::array();
  for (const auto& p : h.anchors) {
    json row = json::array();
    for (const auto& c : p) row.push_back(format_rational(c));
    anchors.push_back(std::move(row));
  }
  return json{{"spec", to_json(h.spec)},         {"alphas", h.alphas},   {"b", h.b}, {"anchors", anchors},
              {"support", to_json(h.support_indices)}, {"objective", h.objective}};
}

}  // namespace critpts
