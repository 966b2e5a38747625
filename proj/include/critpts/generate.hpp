#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "critpts/dataset.hpp"
#include "critpts/error.hpp"
#include "critpts/random.hpp"
#include "critpts/rational.hpp"

namespace critpts {

namespace detail {

inline Rational rounded(double v, long scale) { return Rational(static_cast<long>(std::llround(v * scale)), scale); }

}  // namespace detail

/// Seeded realizable dataset: a random direction and offset, points drawn
/// uniformly from a box and kept only if their distance to the hyperplane is
/// at least `min_margin` (checked exactly after rounding). Labels alternate
/// +, -, +, ... in index order.
inline LabeledDataset generate_separable(std::uint64_t seed, std::size_t n_points, std::size_t dim,
                                         const Rational& min_margin) {
  if (n_points < 2) throw Error(ErrorCode::InvalidParams, "need at least 2 points");
  if (dim < 1) throw Error(ErrorCode::InvalidParams, "dimension must be at least 1");
  if (!(min_margin > 0)) throw Error(ErrorCode::InvalidParams, "margin must be positive");

  Rng rng(seed);
  Point normal(dim);
  Rational norm_sq = 0;
  while (norm_sq == 0) {
    for (auto& c : normal) c = detail::rounded(rng.normal(), 1000);
    norm_sq = 0;
    for (const auto& c : normal) norm_sq += c * c;
  }
  const Rational offset = detail::rounded(rng.uniform(-1, 1), 100);
  const double half_width = 5 + 2 * to_double(min_margin);
  const Rational needed = min_margin * min_margin * norm_sq;

  std::vector<Point> points;
  std::vector<Label> labels;
  while (points.size() < n_points) {
    const Label want = points.size() % 2 == 0 ? Label::Positive : Label::Negative;
    Point p(dim);
    for (auto& c : p) c = detail::rounded(rng.uniform(-half_width, half_width), 100);
    const Rational s = dot(normal, p) - offset;
    if (s * s < needed || (s > 0) != (want == Label::Positive)) continue;
    if (std::find(points.begin(), points.end(), p) != points.end()) continue;
    points.push_back(std::move(p));
    labels.push_back(want);
  }
  return LabeledDataset(std::move(points), std::move(labels));
}

/// Seeded XOR-style dataset: points in the four quadrants of [-5,5]^2 with
/// both coordinates at least `gap` away from zero, labeled by the sign of x*y.
/// Not linearly separable once every quadrant is populated; separable under a
/// degree-2 polynomial kernel.
inline LabeledDataset generate_xor(std::uint64_t seed, std::size_t n_points, const Rational& gap) {
  if (n_points < 4) throw Error(ErrorCode::InvalidParams, "need at least 4 points");
  if (!(gap > 0) || !(gap < 5)) throw Error(ErrorCode::InvalidParams, "gap must lie in (0, 5)");

  Rng rng(seed);
  const double lo = to_double(gap);
  std::vector<Point> points;
  std::vector<Label> labels;
  while (points.size() < n_points) {
    const std::size_t quadrant = points.size() % 4;
    Rational x = detail::rounded(rng.uniform(lo, 5), 100);
    Rational y = detail::rounded(rng.uniform(lo, 5), 100);
    if (x < gap || y < gap) continue;
    if (quadrant == 1 || quadrant == 2) x = -x;
    if (quadrant == 2 || quadrant == 3) y = -y;
    Point p{x, y};
    if (std::find(points.begin(), points.end(), p) != points.end()) continue;
    labels.push_back(x * y > 0 ? Label::Positive : Label::Negative);
    points.push_back(std::move(p));
  }
  return LabeledDataset(std::move(points), std::move(labels));
}

}  // namespace critpts
