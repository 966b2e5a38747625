#pragma once

#include <concepts>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "critpts/dataset.hpp"
#include "critpts/error.hpp"
#include "critpts/index_set.hpp"
#include "critpts/rational.hpp"
#include "critpts/simplex.hpp"

namespace critpts {

/// Strict separator, normalised so that positives score >= 1 and negatives <= -1.
struct Separator {
  LinearClassifier classifier;
};

/// Farkas witness: nonnegative multipliers, one per input point, such that
///   sum_pos l_i (x_i, -1) + sum_neg l_j (-x_j, 1) = 0   and   sum l = 1,
/// which contradicts the margin-one system (the combination would have to be >= sum l).
struct Infeasibility {
  std::vector<Rational> pos_multipliers;
  std::vector<Rational> neg_multipliers;
};

class SeparabilityResult {
 public:
  explicit SeparabilityResult(Separator s) : value_(std::move(s)) {}
  explicit SeparabilityResult(Infeasibility w) : value_(std::move(w)) {}

  bool separable() const { return std::holds_alternative<Separator>(value_); }
  const LinearClassifier& separator() const { return std::get<Separator>(value_).classifier; }
  const Infeasibility& witness() const { return std::get<Infeasibility>(value_); }

  /// Re-checks the result exactly against the inputs it was computed from.
  bool verify(std::span<const Point> pos, std::span<const Point> neg) const {
    if (separable()) {
      const auto& h = separator();
      bool nonzero = false;
      for (const auto& v : h.direction) nonzero = nonzero || v != 0;
      if (!nonzero) return false;
      for (const auto& x : pos)
        if (h.score(x) < 1) return false;
      for (const auto& x : neg)
        if (h.score(x) > -1) return false;
      return true;
    }
    const auto& w = witness();
    if (w.pos_multipliers.size() != pos.size() || w.neg_multipliers.size() != neg.size()) return false;
    const std::size_t dim = !pos.empty() ? pos.front().size() : neg.front().size();
    Point sum(dim, Rational(0));
    Rational offset_sum = 0, total = 0;
    for (std::size_t i = 0; i < pos.size(); ++i) {
      if (w.pos_multipliers[i] < 0) return false;
      for (std::size_t k = 0; k < dim; ++k) sum[k] += w.pos_multipliers[i] * pos[i][k];
      offset_sum -= w.pos_multipliers[i];
      total += w.pos_multipliers[i];
    }
    for (std::size_t j = 0; j < neg.size(); ++j) {
      if (w.neg_multipliers[j] < 0) return false;
      for (std::size_t k = 0; k < dim; ++k) sum[k] -= w.neg_multipliers[j] * neg[j][k];
      offset_sum += w.neg_multipliers[j];
      total += w.neg_multipliers[j];
    }
    for (const auto& v : sum)
      if (v != 0) return false;
    return offset_sum == 0 && total > 0;
  }

 private:
  std::variant<Separator, Infeasibility> value_;
};

namespace detail {

/// First-occurrence positions of the distinct points in `pts`.
inline std::vector<std::size_t> distinct_positions(std::span<const Point> pts) {
  std::map<Point, std::size_t> first;
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < pts.size(); ++i)
    if (first.emplace(pts[i], i).second) out.push_back(i);
  return out;
}

inline std::size_t common_dimension(std::span<const Point> a, std::span<const Point> b) {
  std::size_t dim = !a.empty() ? a.front().size() : (!b.empty() ? b.front().size() : 0);
  check_dimension(a, dim);
  check_dimension(b, dim);
  return dim;
}

inline Point unit_vector(std::size_t dim) {
  Point d(dim, Rational(0));
  if (dim > 0) d[0] = 1;
  return d;
}

}  // namespace detail

/// Exact strict linear separability of two finite point sets.
inline SeparabilityResult check_separability(std::span<const Point> pos, std::span<const Point> neg) {
  const std::size_t dim = detail::common_dimension(pos, neg);

  if (pos.empty() || neg.empty()) {
    // canonical separator pushed past the nonempty side
    LinearClassifier h{detail::unit_vector(std::max<std::size_t>(dim, 1)), 0};
    if (!pos.empty()) {
      Rational lo = pos.front()[0];
      for (const auto& x : pos) lo = std::min(lo, x[0]);
      h.offset = lo - 1;
    } else if (!neg.empty()) {
      Rational hi = neg.front()[0];
      for (const auto& x : neg) hi = std::max(hi, x[0]);
      h.offset = hi + 1;
    }
    return SeparabilityResult(Separator{std::move(h)});
  }

  const auto pos_rows = detail::distinct_positions(pos);
  const auto neg_rows = detail::distinct_positions(neg);

  // z = (d, c); rows (x, -1) for positives and (-x, 1) for negatives, all >= 1.
  lp::Matrix<Rational> A(pos_rows.size() + neg_rows.size(), dim + 1);
  std::size_t r = 0;
  for (std::size_t i : pos_rows) {
    for (std::size_t k = 0; k < dim; ++k) A(r, k) = pos[i][k];
    A(r, dim) = -1;
    ++r;
  }
  for (std::size_t j : neg_rows) {
    for (std::size_t k = 0; k < dim; ++k) A(r, k) = -neg[j][k];
    A(r, dim) = 1;
    ++r;
  }
  std::vector<Rational> b(A.rows(), Rational(1));

  auto res = lp::solve_inequalities(A, b);
  if (res.feasible) {
    LinearClassifier h;
    h.direction.assign(res.z.begin(), res.z.begin() + static_cast<std::ptrdiff_t>(dim));
    h.offset = res.z[dim];
    return SeparabilityResult(Separator{std::move(h)});
  }
  Infeasibility w;
  w.pos_multipliers.assign(pos.size(), Rational(0));
  w.neg_multipliers.assign(neg.size(), Rational(0));
  r = 0;
  for (std::size_t i : pos_rows) w.pos_multipliers[i] = res.multipliers[r++];
  for (std::size_t j : neg_rows) w.neg_multipliers[j] = res.multipliers[r++];
  return SeparabilityResult(std::move(w));
}

/// Signed separation gap: the largest t such that some direction d with
/// max_k |d_k| = 1 and offset c give d.x - c >= t on pos and <= -t on neg.
/// Positive iff strictly separable, zero when the hulls only touch, negative
/// when they overlap. Solved exactly as one LP per face of the unit cube.
inline Rational separation_margin(std::span<const Point> pos, std::span<const Point> neg) {
  const std::size_t dim = detail::common_dimension(pos, neg);
  if (pos.empty() || neg.empty()) return 1;
  // z = (d, c, t)
  const std::size_t vars = dim + 2;
  std::optional<Rational> best;
  for (std::size_t face = 0; face < dim; ++face)
    for (int side : {1, -1}) {
      lp::Matrix<Rational> A(pos.size() + neg.size() + 2 * dim, vars);
      std::vector<Rational> b(A.rows(), Rational(0));
      std::size_t r = 0;
      for (const auto& x : pos) {
        for (std::size_t k = 0; k < dim; ++k) A(r, k) = x[k];
        A(r, dim) = -1;
        A(r, dim + 1) = -1;
        ++r;
      }
      for (const auto& x : neg) {
        for (std::size_t k = 0; k < dim; ++k) A(r, k) = -x[k];
        A(r, dim) = 1;
        A(r, dim + 1) = -1;
        ++r;
      }
      for (std::size_t k = 0; k < dim; ++k) {
        // -1 <= d_k <= 1, pinned to `side` on the chosen face
        A(r, k) = 1;
        b[r++] = k == face ? Rational(side) : Rational(-1);
        A(r, k) = -1;
        b[r++] = k == face ? Rational(-side) : Rational(-1);
      }
      std::vector<Rational> cost(vars, Rational(0));
      cost[dim + 1] = -1;
      auto res = lp::minimize_inequalities(A, b, cost);
      if (res.status != lp::Status::Optimal) throw Error(ErrorCode::NoConvergence, "margin LP not solved");
      Rational t = -res.value;
      if (!best || t > *best) best = t;
    }
  return *best;
}

/// Any type that can answer "are these two index sets strictly separable?"
/// over a fixed universe of points. Leak and critical points are generic over it.
template <typename B>
concept SeparabilityOracle = requires(const B& backend, const IndexSet& s) {
  { backend.size() } -> std::convertible_to<std::size_t>;
  { backend.separable(s, s) } -> std::same_as<bool>;
};

/// Exact rational backend over a fixed point universe.
class ExactBackend {
 public:
  explicit ExactBackend(std::vector<Point> points) : points_(std::move(points)) {
    if (!points_.empty()) check_dimension(points_, points_.front().size());
  }
  explicit ExactBackend(const LabeledDataset& data) : ExactBackend(data.points()) {}

  std::size_t size() const { return points_.size(); }
  const std::vector<Point>& points() const { return points_; }

  SeparabilityResult check(const IndexSet& pos, const IndexSet& neg) const {
    return check_separability(select(pos), select(neg));
  }
  bool separable(const IndexSet& pos, const IndexSet& neg) const { return check(pos, neg).separable(); }

  std::vector<Point> select(const IndexSet& idx) const {
    idx.check_range(size());
    std::vector<Point> out;
    out.reserve(idx.size());
    for (Index i : idx) out.push_back(points_[i]);
    return out;
  }

 private:
  std::vector<Point> points_;
};

namespace detail {

template <SeparabilityOracle B>
void require_separable(const B& backend, const IndexSet& a_plus, const IndexSet& a_minus) {
  a_plus.check_range(backend.size());
  a_minus.check_range(backend.size());
  if (!(a_plus & a_minus).empty())
    throw Error(ErrorCode::InvalidParams, "alleged positive and negative sets overlap");
  if (!backend.separable(a_plus, a_minus))
    throw Error(ErrorCode::NotSeparable, "A+ " + to_string(a_plus) + " and A- " + to_string(a_minus) +
                                             " are not strictly separable");
}

}  // namespace detail

/// x is leaked iff x is in A-, or some classifier consistent with (A+, A-)
/// labels x positive.
template <SeparabilityOracle B>
bool leak_contains_with(const B& backend, const IndexSet& a_plus, const IndexSet& a_minus, Index x) {
  detail::require_separable(backend, a_plus, a_minus);
  if (x >= backend.size()) throw Error(ErrorCode::IndexOutOfRange, "point index " + std::to_string(x));
  if (a_minus.contains(x)) return true;
  return backend.separable(a_plus.with(x), a_minus);
}

template <SeparabilityOracle B>
IndexSet leak_set_with(const B& backend, const IndexSet& a_plus, const IndexSet& a_minus) {
  detail::require_separable(backend, a_plus, a_minus);
  std::vector<Index> out;
  for (Index x = 0; x < backend.size(); ++x)
    if (a_minus.contains(x) || a_plus.contains(x) || backend.separable(a_plus.with(x), a_minus)) out.push_back(x);
  return IndexSet(std::move(out));
}

/// C*(A+): the points outside A+ that leak once every other point is labelled negative.
template <SeparabilityOracle B>
IndexSet critical_points_with(const B& backend, const IndexSet& a_plus) {
  const IndexSet rest = IndexSet::range(backend.size()) - a_plus;
  detail::require_separable(backend, a_plus, rest);
  std::vector<Index> out;
  for (Index x : rest)
    if (backend.separable(a_plus.with(x), rest.without(x))) out.push_back(x);
  return IndexSet(std::move(out));
}

inline bool leak_contains(const LabeledDataset& S, const IndexSet& a_plus, const IndexSet& a_minus, Index x) {
  return leak_contains_with(ExactBackend(S), a_plus, a_minus, x);
}

inline IndexSet leak_set(const LabeledDataset& S, const IndexSet& a_plus, const IndexSet& a_minus) {
  return leak_set_with(ExactBackend(S), a_plus, a_minus);
}

inline IndexSet critical_points(const LabeledDataset& S, const IndexSet& a_plus) {
  return critical_points_with(ExactBackend(S), a_plus);
}

/// Vertices of Safe(S+, S-). These coincide with the critical points, which is
/// how they are computed. When every point lies on one hyperplane the Safe set
/// has no vertices, but the formula still reports the critical points.
inline IndexSet vertices_of_safe(const LabeledDataset& S, const IndexSet& s_plus) {
  return critical_points(S, s_plus);
}

/// x is safe iff every weakly separating direction d has d.x <= max_d(A-).
/// Decided as infeasibility of
///   d.(a+ - a-) >= 0 for all pairs,  d.(x - a-) >= 1 for all a- in A-.
inline bool safe_contains(std::span<const Point> a_plus, std::span<const Point> a_minus, const Point& x) {
  const std::size_t dim = detail::common_dimension(a_plus, a_minus);
  if (a_minus.empty()) throw Error(ErrorCode::EmptyNegatives, "Safe(A+, A-) needs at least one negative");
  if (x.size() != dim) throw Error(ErrorCode::DimensionMismatch, "query point dimension");
  if (!check_separability(a_plus, a_minus).separable())
    throw Error(ErrorCode::NotSeparable, "A+ and A- are not strictly separable");

  const auto plus_rows = detail::distinct_positions(a_plus);
  const auto minus_rows = detail::distinct_positions(a_minus);
  lp::Matrix<Rational> A(plus_rows.size() * minus_rows.size() + minus_rows.size(), dim);
  std::vector<Rational> b(A.rows(), Rational(0));
  std::size_t r = 0;
  for (std::size_t j : minus_rows)
    for (std::size_t i : plus_rows) {
      for (std::size_t k = 0; k < dim; ++k) A(r, k) = a_plus[i][k] - a_minus[j][k];
      ++r;
    }
  for (std::size_t j : minus_rows) {
    for (std::size_t k = 0; k < dim; ++k) A(r, k) = x[k] - a_minus[j][k];
    b[r++] = 1;
  }
  return !lp::solve_inequalities(A, b).feasible;
}

/// Independent leak test: z leaks iff (-z, -1) lies outside the cone generated
/// by (x, 1) for x in A+ and (-y, -1) for y in A-. Cone membership is an
/// exact standard-form feasibility problem, with no separator in sight.
inline bool cone_leak_oracle(const LabeledDataset& S, const IndexSet& a_plus, const IndexSet& a_minus, Index z) {
  ExactBackend backend(S);
  detail::require_separable(backend, a_plus, a_minus);
  if (z >= S.size()) throw Error(ErrorCode::IndexOutOfRange, "point index " + std::to_string(z));
  if (a_minus.contains(z)) return true;

  const std::size_t dim = S.dim();
  lp::Matrix<Rational> M(dim + 1, a_plus.size() + a_minus.size());
  std::size_t col = 0;
  for (Index i : a_plus) {
    for (std::size_t k = 0; k < dim; ++k) M(k, col) = S.point(i)[k];
    M(dim, col++) = 1;
  }
  for (Index j : a_minus) {
    for (std::size_t k = 0; k < dim; ++k) M(k, col) = -S.point(j)[k];
    M(dim, col++) = -1;
  }
  std::vector<Rational> target(dim + 1);
  for (std::size_t k = 0; k < dim; ++k) target[k] = -S.point(z)[k];
  target[dim] = -1;
  if (M.cols() == 0) return true;
  return lp::find_feasible(M, target).status != lp::Status::Optimal;
}

}  // namespace critpts
