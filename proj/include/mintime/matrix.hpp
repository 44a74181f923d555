#pragma once

#include <algorithm>
#include <cassert>
#include <initializer_list>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mintime/errors.hpp"
#include "mintime/scalar.hpp"

namespace mintime {

/// Row-major dense matrix over an exact or floating scalar. Sizes here are tiny
/// (at most a few dozen), so no effort goes into blocking or expression templates.
template <typename S>
class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols) : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows * cols), S(0)) {}

  Matrix(std::initializer_list<std::initializer_list<S>> init) {
    rows_ = static_cast<int>(init.size());
    cols_ = rows_ ? static_cast<int>(init.begin()->size()) : 0;
    data_.reserve(static_cast<std::size_t>(rows_ * cols_));
    for (const auto& row : init) {
      assert(static_cast<int>(row.size()) == cols_);
      data_.insert(data_.end(), row.begin(), row.end());
    }
  }

  static Matrix identity(int n) {
    Matrix out(n, n);
    for (int i = 0; i < n; ++i) out(i, i) = S(1);
    return out;
  }

  static Matrix from_rows(const std::vector<std::vector<S>>& rows, int cols) {
    Matrix out(static_cast<int>(rows.size()), cols);
    for (int i = 0; i < out.rows(); ++i)
      for (int j = 0; j < cols; ++j) out(i, j) = rows[i][j];
    return out;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  S& operator()(int i, int j) { return data_[static_cast<std::size_t>(i * cols_ + j)]; }
  const S& operator()(int i, int j) const { return data_[static_cast<std::size_t>(i * cols_ + j)]; }

  std::vector<S> row(int i) const {
    return std::vector<S>(data_.begin() + i * cols_, data_.begin() + (i + 1) * cols_);
  }

  std::vector<S> col(int j) const {
    std::vector<S> out(static_cast<std::size_t>(rows_));
    for (int i = 0; i < rows_; ++i) out[i] = (*this)(i, j);
    return out;
  }

  void set_row(int i, const std::vector<S>& values) {
    assert(static_cast<int>(values.size()) == cols_);
    std::copy(values.begin(), values.end(), data_.begin() + i * cols_);
  }

  void set_col(int j, const std::vector<S>& values) {
    for (int i = 0; i < rows_; ++i) (*this)(i, j) = values[i];
  }

  /// First k rows.
  Matrix top_rows(int k) const {
    Matrix out(k, cols_);
    std::copy(data_.begin(), data_.begin() + k * cols_, out.data_.begin());
    return out;
  }

  Matrix block(int r0, int c0, int nr, int nc) const {
    Matrix out(nr, nc);
    for (int i = 0; i < nr; ++i)
      for (int j = 0; j < nc; ++j) out(i, j) = (*this)(r0 + i, c0 + j);
    return out;
  }

  Matrix transpose() const {
    Matrix out(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
    return out;
  }

  bool is_zero(double tol = 0.0) const {
    return std::all_of(data_.begin(), data_.end(), [tol](const S& v) { return scalar_traits<S>::is_zero(v, tol); });
  }

  double max_abs() const {
    double out = 0.0;
    for (const auto& v : data_) out = std::max(out, std::abs(to_double(v)));
    return out;
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    assert(a.cols_ == b.rows_);
    Matrix out(a.rows_, b.cols_);
    for (int i = 0; i < a.rows_; ++i)
      for (int k = 0; k < a.cols_; ++k) {
        const S& aik = a(i, k);
        if (aik == S(0)) continue;
        for (int j = 0; j < b.cols_; ++j) out(i, j) += aik * b(k, j);
      }
    return out;
  }

  friend Matrix operator+(Matrix a, const Matrix& b) {
    assert(a.rows_ == b.rows_ && a.cols_ == b.cols_);
    for (std::size_t i = 0; i < a.data_.size(); ++i) a.data_[i] += b.data_[i];
    return a;
  }

  friend Matrix operator-(Matrix a, const Matrix& b) {
    assert(a.rows_ == b.rows_ && a.cols_ == b.cols_);
    for (std::size_t i = 0; i < a.data_.size(); ++i) a.data_[i] -= b.data_[i];
    return a;
  }

  friend Matrix operator*(const S& s, Matrix a) {
    for (auto& v : a.data_) v *= s;
    return a;
  }

  std::vector<S> operator*(const std::vector<S>& v) const {
    assert(static_cast<int>(v.size()) == cols_);
    std::vector<S> out(static_cast<std::size_t>(rows_), S(0));
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) out[i] += (*this)(i, j) * v[j];
    return out;
  }

  template <typename T>
  Matrix<T> cast() const {
    Matrix<T> out(rows_, cols_);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) {
        if constexpr (std::is_same_v<S, Rational> && !std::is_same_v<T, Rational>) {
          out(i, j) = (*this)(i, j).template convert_to<T>();
        } else {
          out(i, j) = T((*this)(i, j));
        }
      }
    return out;
  }

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<S> data_;
};

/// Row vector times matrix.
template <typename S>
std::vector<S> row_times(const std::vector<S>& row, const Matrix<S>& a) {
  assert(static_cast<int>(row.size()) == a.rows());
  std::vector<S> out(static_cast<std::size_t>(a.cols()), S(0));
  for (int i = 0; i < a.rows(); ++i) {
    if (row[i] == S(0)) continue;
    for (int j = 0; j < a.cols(); ++j) out[j] += row[i] * a(i, j);
  }
  return out;
}

namespace detail {

// Reduced row echelon form in place; returns pivot columns. Exact for rationals;
// partial pivoting with an absolute tolerance for doubles.
template <typename S>
std::vector<int> row_reduce(Matrix<S>& a, double tol) {
  std::vector<int> pivots;
  int r = 0;
  for (int c = 0; c < a.cols() && r < a.rows(); ++c) {
    int best = -1;
    if constexpr (scalar_traits<S>::exact) {
      for (int i = r; i < a.rows(); ++i)
        if (a(i, c) != S(0)) {
          best = i;
          break;
        }
    } else {
      double best_abs = tol;
      for (int i = r; i < a.rows(); ++i)
        if (std::abs(a(i, c)) > best_abs) {
          best_abs = std::abs(a(i, c));
          best = i;
        }
    }
    if (best < 0) continue;
    if (best != r)
      for (int j = 0; j < a.cols(); ++j) std::swap(a(r, j), a(best, j));
    const S inv = S(1) / a(r, c);
    for (int j = 0; j < a.cols(); ++j) a(r, j) *= inv;
    for (int i = 0; i < a.rows(); ++i) {
      if (i == r || a(i, c) == S(0)) continue;
      const S f = a(i, c);
      for (int j = 0; j < a.cols(); ++j) a(i, j) -= f * a(r, j);
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

inline Eigen::MatrixXd to_eigen(const Matrix<double>& a) {
  Eigen::MatrixXd out(a.rows(), a.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) out(i, j) = a(i, j);
  return out;
}

}  // namespace detail

/// Numerical rank. Exact elimination for rationals. For doubles a singular value
/// counts when it exceeds eps times the largest one, and the whole matrix is rank 0
/// when its largest singular value is below eps * scale.
template <typename S>
int rank(const Matrix<S>& a, double eps = 0.0, double scale = 1.0) {
  if (a.rows() == 0 || a.cols() == 0) return 0;
  if constexpr (scalar_traits<S>::exact) {
    Matrix<S> w = a;
    return static_cast<int>(detail::row_reduce(w, 0.0).size());
  } else {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(detail::to_eigen(a));
    const auto& sv = svd.singularValues();
    if (sv.size() == 0 || sv(0) <= eps * scale) return 0;
    int r = 0;
    for (int i = 0; i < sv.size(); ++i)
      if (sv(i) > eps * sv(0)) ++r;
    return r;
  }
}

/// Stacks `rows` over one extra row.
template <typename S>
Matrix<S> stack_row(const Matrix<S>& rows, const std::vector<S>& extra) {
  Matrix<S> out(rows.rows() + 1, static_cast<int>(extra.size()));
  for (int i = 0; i < rows.rows(); ++i)
    for (int j = 0; j < rows.cols(); ++j) out(i, j) = rows(i, j);
  out.set_row(rows.rows(), extra);
  return out;
}

/// Solves a * rows = target for the row vector a, where `rows` has full row rank.
/// Returns nullopt when target is not in the row space (exact backends only).
template <typename S>
std::optional<std::vector<S>> solve_row_combination(const Matrix<S>& rows, const std::vector<S>& target,
                                                    double eps = 0.0) {
  const int k = rows.rows();
  const int m = rows.cols();
  if (k == 0) {
    for (const auto& v : target)
      if (!scalar_traits<S>::is_zero(v, eps)) return std::nullopt;
    return std::vector<S>{};
  }
  if constexpr (scalar_traits<S>::exact) {
    // rows^T a^T = target^T, augmented and reduced.
    Matrix<S> aug(m, k + 1);
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < k; ++j) aug(i, j) = rows(j, i);
      aug(i, k) = target[i];
    }
    const auto piv = detail::row_reduce(aug, 0.0);
    if (!piv.empty() && piv.back() == k) return std::nullopt;
    std::vector<S> a(static_cast<std::size_t>(k), S(0));
    for (std::size_t r = 0; r < piv.size(); ++r) a[piv[r]] = aug(static_cast<int>(r), k);
    return a;
  } else {
    Eigen::MatrixXd At = detail::to_eigen(rows).transpose();
    Eigen::VectorXd b(m);
    for (int i = 0; i < m; ++i) b(i) = target[i];
    // Least squares: the caller has already decided dependence with its rank test.
    Eigen::VectorXd x = At.colPivHouseholderQr().solve(b);
    return std::vector<S>(x.data(), x.data() + k);
  }
}

template <typename S>
std::string to_string(const Matrix<S>& a) {
  std::string out = "[";
  for (int i = 0; i < a.rows(); ++i) {
    if (i) out += "; ";
    for (int j = 0; j < a.cols(); ++j) {
      if (j) out += ", ";
      out += to_string(a(i, j));
    }
  }
  return out + "]";
}

}  // namespace mintime
