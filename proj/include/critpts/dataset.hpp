#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "critpts/error.hpp"
#include "critpts/index_set.hpp"
#include "critpts/rational.hpp"

namespace critpts {

/// A point in R^n with exact rational coordinates.
using Point = std::vector<Rational>;

enum class Label : int { Negative = -1, Positive = 1 };

inline int sign_of(Label l) { return static_cast<int>(l); }

inline Label label_from_int(int v) {
  if (v == 1) return Label::Positive;
  if (v == -1) return Label::Negative;
  throw Error(ErrorCode::ParseError, "label must be 1 or -1, got " + std::to_string(v));
}

inline Point make_point(std::initializer_list<const char*> coords) {
  Point p;
  for (const char* c : coords) p.push_back(parse_rational(c));
  return p;
}

inline Rational dot(const Point& a, const Point& b) {
  Rational s = 0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

inline std::vector<double> to_doubles(const Point& p) {
  std::vector<double> out(p.size());
  for (std::size_t k = 0; k < p.size(); ++k) out[k] = to_double(p[k]);
  return out;
}

inline void check_dimension(std::span<const Point> points, std::size_t dim) {
  for (const auto& p : points)
    if (p.size() != dim)
      throw Error(ErrorCode::DimensionMismatch,
                  "expected dimension " + std::to_string(dim) + ", got " + std::to_string(p.size()));
}

/// Finite point set S with +/-1 labels. Index order is insertion order.
class LabeledDataset {
 public:
  LabeledDataset() = default;

  LabeledDataset(std::vector<Point> points, std::vector<Label> labels)
      : points_(std::move(points)), labels_(std::move(labels)) {
    if (points_.size() != labels_.size())
      throw Error(ErrorCode::InvalidDataset, "points and labels differ in length");
    if (points_.empty()) throw Error(ErrorCode::InvalidDataset, "dataset is empty");
    dim_ = points_.front().size();
    if (dim_ == 0) throw Error(ErrorCode::InvalidDataset, "dimension must be at least 1");
    check_dimension(points_, dim_);

    std::map<Point, Label> seen;
    for (std::size_t i = 0; i < points_.size(); ++i) {
      auto [it, inserted] = seen.emplace(points_[i], labels_[i]);
      if (!inserted && it->second != labels_[i])
        throw Error(ErrorCode::InvalidDataset,
                    "point " + std::to_string(i) + " duplicates an earlier point with the opposite label");
    }
  }

  std::size_t size() const { return points_.size(); }
  std::size_t dim() const { return dim_; }
  const std::vector<Point>& points() const { return points_; }
  const Point& point(Index i) const { return points_.at(i); }
  const std::vector<Label>& labels() const { return labels_; }
  Label label(Index i) const { return labels_.at(i); }

  IndexSet all() const { return IndexSet::range(size()); }

  IndexSet positives() const { return with_label(Label::Positive); }
  IndexSet negatives() const { return with_label(Label::Negative); }

  std::vector<Point> select(const IndexSet& idx) const {
    idx.check_range(size());
    std::vector<Point> out;
    out.reserve(idx.size());
    for (Index i : idx) out.push_back(points_[i]);
    return out;
  }

  /// Same points, labels taken from membership in `positives`.
  LabeledDataset relabeled(const IndexSet& positives) const {
    positives.check_range(size());
    std::vector<Label> labels(size(), Label::Negative);
    for (Index i : positives) labels[i] = Label::Positive;
    return LabeledDataset(points_, std::move(labels));
  }

  LabeledDataset subset(const IndexSet& idx) const {
    idx.check_range(size());
    std::vector<Point> pts;
    std::vector<Label> lbl;
    for (Index i : idx) {
      pts.push_back(points_[i]);
      lbl.push_back(labels_[i]);
    }
    return LabeledDataset(std::move(pts), std::move(lbl));
  }

  /// Index of the first point with exactly these coordinates.
  Index index_of(const Point& p) const {
    auto it = std::find(points_.begin(), points_.end(), p);
    if (it == points_.end()) throw Error(ErrorCode::IndexOutOfRange, "point not in dataset");
    return static_cast<Index>(it - points_.begin());
  }

 private:
  IndexSet with_label(Label l) const {
    std::vector<Index> out;
    for (Index i = 0; i < size(); ++i)
      if (labels_[i] == l) out.push_back(i);
    return IndexSet(std::move(out));
  }

  std::vector<Point> points_;
  std::vector<Label> labels_;
  std::size_t dim_ = 0;
};

/// h(x) = sign(direction . x - offset), with sign(0) = +1.
struct LinearClassifier {
  Point direction;
  Rational offset;

  Rational score(const Point& x) const { return dot(direction, x) - offset; }
  Label classify(const Point& x) const { return score(x) >= 0 ? Label::Positive : Label::Negative; }

  LinearClassifier scaled(const Rational& factor) const {
    LinearClassifier r = *this;
    for (auto& v : r.direction) v *= factor;
    r.offset *= factor;
    return r;
  }
};

}  // namespace critpts
