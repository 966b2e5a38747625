#pragma once

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <ostream>
#include <string>
#include <vector>

#include "critpts/error.hpp"

namespace critpts {

using Index = std::size_t;

/// Sorted, duplicate-free set of dataset indices.
class IndexSet {
 public:
  IndexSet() = default;
  IndexSet(std::initializer_list<Index> items) : items_(items) { normalize(); }
  explicit IndexSet(std::vector<Index> items) : items_(std::move(items)) { normalize(); }

  /// {0, 1, ..., n-1}
  static IndexSet range(std::size_t n) {
    IndexSet s;
    s.items_.resize(n);
    for (Index i = 0; i < n; ++i) s.items_[i] = i;
    return s;
  }

  bool contains(Index i) const { return std::binary_search(items_.begin(), items_.end(), i); }
  std::size_t size() const { return items_.size(); }
  bool empty() const { return items_.empty(); }
  auto begin() const { return items_.begin(); }
  auto end() const { return items_.end(); }
  Index operator[](std::size_t k) const { return items_[k]; }
  const std::vector<Index>& values() const { return items_; }

  void insert(Index i) {
    auto it = std::lower_bound(items_.begin(), items_.end(), i);
    if (it == items_.end() || *it != i) items_.insert(it, i);
  }
  void erase(Index i) {
    auto it = std::lower_bound(items_.begin(), items_.end(), i);
    if (it != items_.end() && *it == i) items_.erase(it);
  }

  IndexSet with(Index i) const {
    IndexSet r = *this;
    r.insert(i);
    return r;
  }
  IndexSet without(Index i) const {
    IndexSet r = *this;
    r.erase(i);
    return r;
  }

  bool is_subset_of(const IndexSet& other) const {
    return std::includes(other.items_.begin(), other.items_.end(), items_.begin(), items_.end());
  }

  /// Throws IndexOutOfRange unless every index is below n.
  void check_range(std::size_t n) const {
    if (!items_.empty() && items_.back() >= n)
      throw Error(ErrorCode::IndexOutOfRange,
                  "index " + std::to_string(items_.back()) + " out of range for " + std::to_string(n) + " points");
  }

  friend IndexSet operator|(const IndexSet& a, const IndexSet& b) {
    IndexSet r;
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(r.items_));
    return r;
  }
  friend IndexSet operator&(const IndexSet& a, const IndexSet& b) {
    IndexSet r;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(r.items_));
    return r;
  }
  friend IndexSet operator-(const IndexSet& a, const IndexSet& b) {
    IndexSet r;
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(r.items_));
    return r;
  }
  friend bool operator==(const IndexSet&, const IndexSet&) = default;

 private:
  void normalize() {
    std::sort(items_.begin(), items_.end());
    items_.erase(std::unique(items_.begin(), items_.end()), items_.end());
  }

  std::vector<Index> items_;
};

inline std::string to_string(const IndexSet& s) {
  std::string out = "{";
  for (std::size_t k = 0; k < s.size(); ++k) {
    if (k) out += ",";
    out += std::to_string(s[k]);
  }
  return out + "}";
}

inline std::ostream& operator<<(std::ostream& os, const IndexSet& s) { return os << to_string(s); }

}  // namespace critpts
