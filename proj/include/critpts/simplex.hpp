#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "critpts/error.hpp"

// Dense tableau simplex over an ordered field. Bland's rule throughout, so it
// terminates on degenerate problems. Instantiated with exact rationals
// (eps = 0) for the geometric core and with double for the kernel backend.

namespace critpts::lp {

template <typename T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, T(0)) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  T& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const T& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  Matrix transposed() const {
    Matrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
    return t;
  }

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<T> data_;
};

enum class Status { Optimal, Infeasible, Unbounded };

/// Result of a standard-form problem {M x = r, x >= 0}.
template <typename T>
struct StandardResult {
  Status status = Status::Infeasible;
  std::vector<T> x;
  T value = T(0);
  /// Infeasible only: y with y^T M <= 0 column-wise and y^T r > 0.
  std::vector<T> farkas;
  /// Phase-one optimum (sum of artificials). Zero iff feasible.
  T infeasibility = T(0);
  std::size_t pivots = 0;
};

namespace detail {

template <typename T>
T absval(const T& v) {
  return v < T(0) ? T(-v) : v;
}

template <typename T>
class Tableau {
 public:
  Tableau(const Matrix<T>& M, const std::vector<T>& r, T eps) : eps_(eps), m_(M.rows()), n_(M.cols()) {
    width_ = n_ + m_ + 1;
    t_.assign(m_ * width_, T(0));
    sigma_.assign(m_, 1);
    basis_.resize(m_);
    active_.assign(m_, true);
    for (std::size_t i = 0; i < m_; ++i) {
      if (r[i] < T(0)) sigma_[i] = -1;
      for (std::size_t j = 0; j < n_; ++j) at(i, j) = sigma_[i] < 0 ? T(-M(i, j)) : M(i, j);
      at(i, n_ + i) = T(1);
      rhs(i) = sigma_[i] < 0 ? T(-r[i]) : r[i];
      basis_[i] = n_ + i;
    }
  }

  /// Minimise the sum of artificials; returns the optimum.
  T phase_one(std::size_t& pivots, std::size_t max_pivots) {
    std::vector<T> cost(n_ + m_, T(0));
    for (std::size_t i = 0; i < m_; ++i) cost[n_ + i] = T(1);
    cost_ = cost;
    compute_reduced_costs();
    if (run(n_ + m_, pivots, max_pivots) != Status::Optimal)
      throw Error(ErrorCode::NoConvergence, "phase one did not terminate");
    return objective();
  }

  /// Simplex multipliers of the phase-one problem, mapped back to the
  /// caller's row signs.
  std::vector<T> phase_one_duals() const {
    std::vector<T> y(m_);
    for (std::size_t i = 0; i < m_; ++i) {
      T pi = T(1) - reduced_[n_ + i];
      y[i] = sigma_[i] < 0 ? T(-pi) : pi;
    }
    return y;
  }

  void drive_out_artificials(std::size_t& pivots) {
    for (std::size_t i = 0; i < m_; ++i) {
      if (!active_[i] || basis_[i] < n_) continue;
      std::optional<std::size_t> col;
      for (std::size_t j = 0; j < n_ && !col; ++j)
        if (absval(at(i, j)) > eps_) col = j;
      if (col) {
        pivot(i, *col);
        ++pivots;
      } else {
        active_[i] = false;  // redundant row
      }
    }
  }

  Status phase_two(const std::vector<T>& c, std::size_t& pivots, std::size_t max_pivots) {
    cost_.assign(n_ + m_, T(0));
    for (std::size_t j = 0; j < n_; ++j) cost_[j] = c[j];
    compute_reduced_costs();
    return run(n_, pivots, max_pivots);
  }

  std::vector<T> solution() const {
    std::vector<T> x(n_, T(0));
    for (std::size_t i = 0; i < m_; ++i)
      if (active_[i] && basis_[i] < n_) x[basis_[i]] = rhs(i);
    return x;
  }

  T objective() const {
    T z(0);
    for (std::size_t i = 0; i < m_; ++i)
      if (active_[i]) z += cost_[basis_[i]] * rhs(i);
    return z;
  }

 private:
  T& at(std::size_t i, std::size_t j) { return t_[i * width_ + j]; }
  const T& at(std::size_t i, std::size_t j) const { return t_[i * width_ + j]; }
  T& rhs(std::size_t i) { return t_[i * width_ + width_ - 1]; }
  const T& rhs(std::size_t i) const { return t_[i * width_ + width_ - 1]; }

  void compute_reduced_costs() {
    reduced_ = cost_;
    for (std::size_t i = 0; i < m_; ++i) {
      if (!active_[i]) continue;
      const T& cb = cost_[basis_[i]];
      if (cb == T(0)) continue;
      for (std::size_t j = 0; j < n_ + m_; ++j) reduced_[j] -= cb * at(i, j);
    }
  }

  Status run(std::size_t allowed_cols, std::size_t& pivots, std::size_t max_pivots) {
    while (true) {
      std::optional<std::size_t> enter;
      for (std::size_t j = 0; j < allowed_cols; ++j)
        if (reduced_[j] < T(-eps_)) {
          enter = j;
          break;
        }
      if (!enter) return Status::Optimal;

      std::optional<std::size_t> leave;
      T best_ratio(0);
      for (std::size_t i = 0; i < m_; ++i) {
        if (!active_[i] || !(at(i, *enter) > eps_)) continue;
        T ratio = rhs(i) / at(i, *enter);
        if (!leave || ratio < best_ratio - eps_ ||
            (absval(T(ratio - best_ratio)) <= eps_ && basis_[i] < basis_[*leave])) {
          leave = i;
          best_ratio = ratio;
        }
      }
      if (!leave) return Status::Unbounded;
      pivot(*leave, *enter);
      if (++pivots > max_pivots) throw Error(ErrorCode::NoConvergence, "simplex pivot limit exceeded");
    }
  }

  void pivot(std::size_t row, std::size_t col) {
    T p = at(row, col);
    for (std::size_t j = 0; j < width_; ++j) at(row, j) /= p;
    for (std::size_t i = 0; i < m_; ++i) {
      if (i == row || !active_[i]) continue;
      T f = at(i, col);
      if (f == T(0)) continue;
      for (std::size_t j = 0; j < width_; ++j) at(i, j) -= f * at(row, j);
    }
    T f = reduced_[col];
    if (f != T(0))
      for (std::size_t j = 0; j < n_ + m_; ++j) reduced_[j] -= f * at(row, j);
    basis_[row] = col;
  }

  T eps_;
  std::size_t m_, n_, width_;
  std::vector<T> t_;
  std::vector<int> sigma_;
  std::vector<std::size_t> basis_;
  std::vector<bool> active_;
  std::vector<T> cost_, reduced_;
};

}  // namespace detail

constexpr std::size_t kDefaultMaxPivots = 1'000'000;

/// Decides {M x = r, x >= 0}. Infeasible results carry a Farkas certificate.
template <typename T>
StandardResult<T> find_feasible(const Matrix<T>& M, const std::vector<T>& r, T eps = T(0),
                                std::size_t max_pivots = kDefaultMaxPivots) {
  StandardResult<T> out;
  detail::Tableau<T> tab(M, r, eps);
  out.infeasibility = tab.phase_one(out.pivots, max_pivots);
  if (out.infeasibility > eps) {
    out.status = Status::Infeasible;
    out.farkas = tab.phase_one_duals();
    return out;
  }
  out.status = Status::Optimal;
  out.x = tab.solution();
  return out;
}

/// min c^T x subject to {M x = r, x >= 0}.
template <typename T>
StandardResult<T> minimize(const Matrix<T>& M, const std::vector<T>& r, const std::vector<T>& c, T eps = T(0),
                           std::size_t max_pivots = kDefaultMaxPivots) {
  StandardResult<T> out;
  detail::Tableau<T> tab(M, r, eps);
  out.infeasibility = tab.phase_one(out.pivots, max_pivots);
  if (out.infeasibility > eps) {
    out.status = Status::Infeasible;
    out.farkas = tab.phase_one_duals();
    return out;
  }
  tab.drive_out_artificials(out.pivots);
  out.status = tab.phase_two(c, out.pivots, max_pivots);
  out.x = tab.solution();
  out.value = tab.objective();
  return out;
}

/// Outcome of {A z >= b} with z free.
template <typename T>
struct InequalityResult {
  bool feasible = false;
  std::vector<T> z;
  /// Infeasible only: lambda >= 0 with A^T lambda = 0 and b^T lambda = 1.
  std::vector<T> multipliers;
};

/// Decides {A z >= b, z free} through its Farkas alternative
/// {A^T l = 0, b^T l = 1, l >= 0}, which has only dim(z)+1 rows. When the
/// alternative is infeasible its certificate (u, t) yields z = -u / t.
template <typename T>
InequalityResult<T> solve_inequalities(const Matrix<T>& A, const std::vector<T>& b, T eps = T(0),
                                       std::size_t max_pivots = kDefaultMaxPivots) {
  const std::size_t rows = A.rows(), vars = A.cols();
  InequalityResult<T> out;
  if (rows == 0) {
    out.feasible = true;
    out.z.assign(vars, T(0));
    return out;
  }
  Matrix<T> alt(vars + 1, rows);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t k = 0; k < vars; ++k) alt(k, i) = A(i, k);
    alt(vars, i) = b[i];
  }
  std::vector<T> rhs(vars + 1, T(0));
  rhs[vars] = T(1);

  auto res = find_feasible(alt, rhs, eps, max_pivots);
  if (res.status == Status::Optimal) {
    out.feasible = false;
    out.multipliers = std::move(res.x);
    return out;
  }
  const T& t = res.farkas[vars];
  if (!(t > eps)) throw Error(ErrorCode::NoConvergence, "degenerate Farkas certificate");
  out.feasible = true;
  out.z.resize(vars);
  for (std::size_t k = 0; k < vars; ++k) out.z[k] = T(-res.farkas[k]) / t;
  return out;
}

/// min c^T z subject to A z >= b with z free.
template <typename T>
StandardResult<T> minimize_inequalities(const Matrix<T>& A, const std::vector<T>& b, const std::vector<T>& c,
                                        T eps = T(0), std::size_t max_pivots = kDefaultMaxPivots) {
  const std::size_t rows = A.rows(), vars = A.cols();
  // columns: z+ (vars), z- (vars), surplus (rows)
  Matrix<T> M(rows, 2 * vars + rows);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t k = 0; k < vars; ++k) {
      M(i, k) = A(i, k);
      M(i, vars + k) = T(-A(i, k));
    }
    M(i, 2 * vars + i) = T(-1);
  }
  std::vector<T> cost(2 * vars + rows, T(0));
  for (std::size_t k = 0; k < vars; ++k) {
    cost[k] = c[k];
    cost[vars + k] = T(-c[k]);
  }
  auto res = minimize(M, b, cost, eps, max_pivots);
  if (res.status == Status::Optimal) {
    std::vector<T> z(vars);
    for (std::size_t k = 0; k < vars; ++k) z[k] = res.x[k] - res.x[vars + k];
    res.x = std::move(z);
  }
  return res;
}

}  // namespace critpts::lp
