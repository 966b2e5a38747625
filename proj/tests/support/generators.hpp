#pragma once

#include <string>
#include <vector>

#include "critpts/dataset.hpp"
#include "critpts/io.hpp"
#include "critpts/random.hpp"

// Seeded instance generators shared by the unit and acceptance suites.

namespace critpts::testing {

inline std::string data_path(const std::string& name) { return std::string(CRITPTS_DATA_DIR) + "/" + name; }

inline LabeledDataset fig_safe() { return load_dataset(data_path("fig_safe.json")); }
inline LabeledDataset fig_critical() { return load_dataset(data_path("fig_critical.json")); }

/// Coordinate with one decimal place in [-range, range].
inline Rational random_coordinate(Rng& rng, int range = 5) {
  return Rational(rng.between(-10 * range, 10 * range), 10);
}

inline Point random_point(Rng& rng, std::size_t dim, int range = 5) {
  Point p(dim);
  for (auto& c : p) c = random_coordinate(rng, range);
  return p;
}

/// Distinct random points, labels from a random rational hyperplane. Points
/// on the hyperplane are redrawn, so the result is strictly separable.
/// Both labels are present whenever `size >= 2`.
inline LabeledDataset random_separable(Rng& rng, std::size_t size, std::size_t dim, int range = 5) {
  while (true) {
    Point normal(dim);
    for (auto& c : normal) c = Rational(rng.between(-9, 9));
    if (std::all_of(normal.begin(), normal.end(), [](const Rational& v) { return v == 0; })) continue;
    Rational offset(rng.between(-20, 20), 10);

    std::vector<Point> pts;
    std::vector<Label> labels;
    while (pts.size() < size) {
      Point p = random_point(rng, dim, range);
      Rational s = dot(normal, p) - offset;
      if (s == 0 || std::find(pts.begin(), pts.end(), p) != pts.end()) continue;
      pts.push_back(std::move(p));
      labels.push_back(s > 0 ? Label::Positive : Label::Negative);
    }
    bool has_pos = std::count(labels.begin(), labels.end(), Label::Positive) > 0;
    bool has_neg = std::count(labels.begin(), labels.end(), Label::Negative) > 0;
    if (size >= 2 && !(has_pos && has_neg)) continue;
    return LabeledDataset(std::move(pts), std::move(labels));
  }
}

/// Two random point clouds; separable or not, depending on the draw. Small
/// integer-ish coordinates make touching and collinear cases common.
inline std::pair<std::vector<Point>, std::vector<Point>> random_point_sets(Rng& rng, std::size_t max_each,
                                                                          std::size_t dim, int range) {
  auto draw = [&](std::size_t count, const Point& shift) {
    std::vector<Point> pts;
    for (std::size_t i = 0; i < count; ++i) {
      Point p(dim);
      for (std::size_t k = 0; k < dim; ++k) p[k] = Rational(rng.between(-range, range)) + shift[k];
      pts.push_back(std::move(p));
    }
    return pts;
  };
  Point shift(dim);
  for (auto& c : shift) c = Rational(rng.between(-2 * range, 2 * range), 2);
  auto pos = draw(1 + rng.below(max_each), Point(dim, Rational(0)));
  auto neg = draw(1 + rng.below(max_each), shift);
  return {std::move(pos), std::move(neg)};
}

}  // namespace critpts::testing
