#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "niep/error.hpp"
#include "niep/scalar.hpp"

namespace niep {

/// Dense row-major matrix. Used with Scalar for exact constructions and with
/// double for anything carrying surds.
template <typename T>
class Matrix {
 public:
  using value_type = T;

  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, const T& fill = T{})
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  Matrix(std::initializer_list<std::initializer_list<T>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
      if (r.size() != cols_) throw Error(Errc::dimension_mismatch, "ragged matrix literal");
      data_.insert(data_.end(), r.begin(), r.end());
    }
  }

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
  }

  static Matrix diagonal(std::span<const T> values) {
    Matrix m(values.size(), values.size());
    for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
    return m;
  }

  [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
  [[nodiscard]] std::size_t cols() const noexcept { return cols_; }
  [[nodiscard]] bool is_square() const noexcept { return rows_ == cols_; }

  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  [[nodiscard]] std::span<const T> row(std::size_t i) const {
    return {data_.data() + i * cols_, cols_};
  }
  [[nodiscard]] std::vector<T> column(std::size_t j) const {
    std::vector<T> c(rows_);
    for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
    return c;
  }
  [[nodiscard]] const std::vector<T>& entries() const noexcept { return data_; }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

using RationalMatrix = Matrix<Scalar>;
using FloatMatrix = Matrix<double>;

template <typename T>
Matrix<T> multiply(const Matrix<T>& a, const Matrix<T>& b) {
  if (a.cols() != b.rows()) throw Error(Errc::dimension_mismatch, "matrix product shape mismatch");
  Matrix<T> c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const T& aik = a(i, k);
      if (aik == 0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  }
  return c;
}

template <typename T>
std::vector<T> multiply(const Matrix<T>& a, std::span<const T> x) {
  if (a.cols() != x.size()) throw Error(Errc::dimension_mismatch, "matrix-vector shape mismatch");
  std::vector<T> y(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    T acc = 0;
    for (std::size_t j = 0; j < a.cols(); ++j) acc += a(i, j) * x[j];
    y[i] = acc;
  }
  return y;
}

template <typename T>
Matrix<T> transpose(const Matrix<T>& a) {
  Matrix<T> t(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
  return t;
}

template <typename T>
T trace(const Matrix<T>& a) {
  T acc = 0;
  for (std::size_t i = 0; i < std::min(a.rows(), a.cols()); ++i) acc += a(i, i);
  return acc;
}

template <typename T>
Matrix<T> scaled(const Matrix<T>& a, const T& factor) {
  Matrix<T> r = a;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) r(i, j) = a(i, j) * factor;
  return r;
}

/// trace(A^k) for k = 1..max_power.
template <typename T>
std::vector<T> power_traces(const Matrix<T>& a, unsigned max_power) {
  std::vector<T> out;
  if (max_power == 0) return out;
  Matrix<T> p = a;
  out.push_back(trace(p));
  for (unsigned k = 2; k <= max_power; ++k) {
    p = multiply(p, a);
    out.push_back(trace(p));
  }
  return out;
}

inline FloatMatrix to_float(const RationalMatrix& a) {
  FloatMatrix f(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) f(i, j) = to_double(a(i, j));
  return f;
}

inline bool all_finite(const FloatMatrix& a) {
  return std::all_of(a.entries().begin(), a.entries().end(), [](double v) { return std::isfinite(v); });
}

/// Exact determinant by fraction-free (Bareiss) elimination. Rows are first
/// scaled to integers by their denominators' lcm.
inline Scalar determinant(const RationalMatrix& a) {
  if (!a.is_square()) throw Error(Errc::dimension_mismatch, "determinant of non-square matrix");
  const std::size_t n = a.rows();
  if (n == 0) return Scalar(1);

  Matrix<Integer> m(n, n);
  Integer scale = 1;
  for (std::size_t i = 0; i < n; ++i) {
    Integer l = 1;
    for (std::size_t j = 0; j < n; ++j) l = lcm(l, a(i, j).get_den());
    scale *= l;
    for (std::size_t j = 0; j < n; ++j) m(i, j) = a(i, j).get_num() * (l / a(i, j).get_den());
  }

  int sign = 1;
  Integer prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m(k, k) == 0) {
      std::size_t p = k + 1;
      while (p < n && m(p, k) == 0) ++p;
      if (p == n) return Scalar(0);
      for (std::size_t j = 0; j < n; ++j) std::swap(m(k, j), m(p, j));
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        m(i, j) = (m(i, j) * m(k, k) - m(i, k) * m(k, j)) / prev;
      }
      m(i, k) = 0;
    }
    prev = m(k, k);
  }
  Integer det = m(n - 1, n - 1);
  if (sign < 0) det = -det;
  return make_scalar(det, scale);
}

/// Monic characteristic polynomial det(tI - A), coefficients lowest degree
/// first. Exact reduction to upper Hessenberg form followed by the standard
/// three-term expansion; O(n^3) rational operations.
inline std::vector<Scalar> characteristic_polynomial(const RationalMatrix& a) {
  if (!a.is_square()) throw Error(Errc::dimension_mismatch, "characteristic polynomial of non-square matrix");
  const std::size_t n = a.rows();
  RationalMatrix h = a;

  for (std::size_t m = 1; m + 1 < n; ++m) {
    std::size_t pivot = m;
    while (pivot < n && h(pivot, m - 1) == 0) ++pivot;
    if (pivot == n) continue;
    if (pivot != m) {
      for (std::size_t j = 0; j < n; ++j) std::swap(h(pivot, j), h(m, j));
      for (std::size_t i = 0; i < n; ++i) std::swap(h(i, pivot), h(i, m));
    }
    for (std::size_t i = m + 1; i < n; ++i) {
      if (h(i, m - 1) == 0) continue;
      Scalar u = h(i, m - 1) / h(m, m - 1);
      for (std::size_t j = 0; j < n; ++j) h(i, j) -= u * h(m, j);
      for (std::size_t r = 0; r < n; ++r) h(r, m) += u * h(r, i);
    }
  }

  // p[k] = characteristic polynomial of the leading k x k block.
  std::vector<std::vector<Scalar>> p(n + 1);
  p[0] = {Scalar(1)};
  for (std::size_t k = 1; k <= n; ++k) {
    std::vector<Scalar> next(k + 1, Scalar(0));
    const auto& prev = p[k - 1];
    for (std::size_t d = 0; d < prev.size(); ++d) {
      next[d + 1] += prev[d];
      next[d] -= h(k - 1, k - 1) * prev[d];
    }
    Scalar subdiag_product = 1;
    for (std::size_t i = 1; i < k; ++i) {
      subdiag_product *= h(k - i, k - i - 1);
      if (subdiag_product == 0) break;
      Scalar coef = h(k - i - 1, k - 1) * subdiag_product;
      const auto& older = p[k - i - 1];
      for (std::size_t d = 0; d < older.size(); ++d) next[d] -= coef * older[d];
    }
    p[k] = std::move(next);
  }
  return p[n];
}

/// Coefficients (lowest degree first) of prod_i (t - roots[i]).
inline std::vector<Scalar> polynomial_from_roots(std::span<const Scalar> roots) {
  std::vector<Scalar> c{Scalar(1)};
  for (const Scalar& r : roots) {
    std::vector<Scalar> next(c.size() + 1, Scalar(0));
    for (std::size_t d = 0; d < c.size(); ++d) {
      next[d + 1] += c[d];
      next[d] -= r * c[d];
    }
    c = std::move(next);
  }
  return c;
}

}  // namespace niep
