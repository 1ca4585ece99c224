#pragma once

// Dense matrices over the exact scalar types. Row vectors act on the left:
// v -> v * M.

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hurwitz/rings.hpp"

namespace hurwitz {

template <class T>
class Matrix {
 public:
  Matrix() = default;
  /// rows x cols of zeros in the ring of `zero`.
  Matrix(std::size_t rows, std::size_t cols, const T& zero)
      : rows_(rows), cols_(cols), zero_(zero.zero_like()), data_(rows * cols, zero_) {}

  static Matrix identity(std::size_t n, const T& like) {
    Matrix m(n, n, like);
    T one = like.from_long(1);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = one;
    return m;
  }
  static Matrix from_rows(const std::vector<std::vector<T>>& rows, const T& like) {
    std::size_t c = rows.empty() ? 0 : rows[0].size();
    Matrix m(rows.size(), c, like);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != c) throw std::invalid_argument("ragged matrix rows");
      for (std::size_t j = 0; j < c; ++j) {
        detail::require_same(like.descriptor(), rows[i][j].descriptor());
        m(i, j) = rows[i][j];
      }
    }
    return m;
  }
  static Matrix from_longs(const std::vector<std::vector<long>>& rows, const T& like) {
    std::size_t c = rows.empty() ? 0 : rows[0].size();
    Matrix m(rows.size(), c, like);
    for (std::size_t i = 0; i < rows.size(); ++i)
      for (std::size_t j = 0; j < c; ++j) m(i, j) = like.from_long(rows[i].at(j));
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }
  const T& zero() const { return zero_; }
  T one() const { return zero_.from_long(1); }
  RingDescriptor descriptor() const { return zero_.descriptor(); }

  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  T& at(std::size_t i, std::size_t j) {
    if (i >= rows_ || j >= cols_) throw std::out_of_range("matrix index");
    return (*this)(i, j);
  }
  const T& at(std::size_t i, std::size_t j) const {
    if (i >= rows_ || j >= cols_) throw std::out_of_range("matrix index");
    return (*this)(i, j);
  }

  std::vector<T> row(std::size_t i) const {
    return std::vector<T>(data_.begin() + i * cols_, data_.begin() + (i + 1) * cols_);
  }
  void set_row(std::size_t i, const std::vector<T>& v) {
    for (std::size_t j = 0; j < cols_; ++j) (*this)(i, j) = v[j];
  }
  void append_row(const std::vector<T>& v) {
    if (rows_ == 0 && cols_ == 0) cols_ = v.size();
    if (v.size() != cols_) throw std::invalid_argument("row length mismatch");
    data_.insert(data_.end(), v.begin(), v.end());
    ++rows_;
  }
  void swap_rows(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t j = 0; j < cols_; ++j) std::swap((*this)(a, j), (*this)(b, j));
  }

  bool is_zero() const {
    for (const auto& v : data_)
      if (!v.is_zero()) return false;
    return true;
  }
  bool is_identity() const { return square() && *this == identity(rows_, zero_); }
  bool is_symmetric() const {
    if (!square()) return false;
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = i + 1; j < cols_; ++j)
        if (!((*this)(i, j) == (*this)(j, i))) return false;
    return true;
  }
  bool is_skew() const {
    if (!square()) return false;
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = i; j < cols_; ++j)
        if (!((*this)(i, j) == -(*this)(j, i))) return false;
    return true;
  }

  Matrix transpose() const {
    Matrix t(cols_, rows_, zero_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }
  /// Entrywise involution.
  Matrix conj() const {
    Matrix t(rows_, cols_, zero_);
    for (std::size_t k = 0; k < data_.size(); ++k) t.data_[k] = involute(data_[k]);
    return t;
  }
  Matrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
    Matrix b(nr, nc, zero_);
    for (std::size_t i = 0; i < nr; ++i)
      for (std::size_t j = 0; j < nc; ++j) b(i, j) = (*this)(r0 + i, c0 + j);
    return b;
  }
  Matrix rows_range(std::size_t r0, std::size_t r1) const { return block(r0, 0, r1 - r0, cols_); }
  void add_block(std::size_t r0, std::size_t c0, const Matrix& b, bool negate = false) {
    for (std::size_t i = 0; i < b.rows(); ++i)
      for (std::size_t j = 0; j < b.cols(); ++j) {
        if (b(i, j).is_zero()) continue;
        if (negate)
          (*this)(r0 + i, c0 + j) -= b(i, j);
        else
          (*this)(r0 + i, c0 + j) += b(i, j);
      }
  }

  Matrix& operator+=(const Matrix& o) {
    check_shape(o);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
    return *this;
  }
  Matrix& operator-=(const Matrix& o) {
    check_shape(o);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
    return *this;
  }
  friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
  friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
  Matrix operator-() const {
    Matrix t = *this;
    for (auto& v : t.data_) v = -v;
    return t;
  }
  friend Matrix operator*(const T& s, const Matrix& m) {
    Matrix t = m;
    for (auto& v : t.data_) v = s * v;
    return t;
  }
  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) throw std::invalid_argument("matrix product shape mismatch");
    detail::require_same(a.descriptor(), b.descriptor());
    Matrix r(a.rows_, b.cols_, a.zero_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const T& aik = a(i, k);
        if (aik.is_zero()) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) {
          const T& bkj = b(k, j);
          if (bkj.is_zero()) continue;
          r(i, j) += aik * bkj;
        }
      }
    return r;
  }
  bool operator==(const Matrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
  }

  /// v * M for a row vector v.
  std::vector<T> left_apply(const std::vector<T>& v) const {
    if (v.size() != rows_) throw std::invalid_argument("vector length mismatch");
    std::vector<T> r(cols_, zero_);
    for (std::size_t k = 0; k < rows_; ++k) {
      if (v[k].is_zero()) continue;
      for (std::size_t j = 0; j < cols_; ++j) {
        const T& mkj = (*this)(k, j);
        if (!mkj.is_zero()) r[j] += v[k] * mkj;
      }
    }
    return r;
  }

  /// Vertical concatenation.
  static Matrix stack(const Matrix& a, const Matrix& b) {
    if (a.rows_ == 0) return b;
    if (b.rows_ == 0) return a;
    if (a.cols_ != b.cols_) throw std::invalid_argument("stack: column mismatch");
    Matrix r = a;
    r.data_.insert(r.data_.end(), b.data_.begin(), b.data_.end());
    r.rows_ += b.rows_;
    return r;
  }
  static Matrix block_diagonal(const Matrix& a, const Matrix& b) {
    Matrix r(a.rows_ + b.rows_, a.cols_ + b.cols_, a.zero_);
    r.add_block(0, 0, a);
    r.add_block(a.rows_, a.cols_, b);
    return r;
  }

  std::vector<std::vector<std::string>> to_strings() const {
    std::vector<std::vector<std::string>> out(rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) out[i].push_back((*this)(i, j).str());
    return out;
  }

 private:
  void check_shape(const Matrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("matrix shape mismatch");
  }
  std::size_t rows_ = 0, cols_ = 0;
  T zero_{};
  std::vector<T> data_;
};

template <class T>
std::vector<T> vec_sub(const std::vector<T>& a, const std::vector<T>& b) {
  std::vector<T> r = a;
  for (std::size_t i = 0; i < r.size(); ++i) r[i] -= b[i];
  return r;
}

template <class T>
std::vector<T> vec_add(const std::vector<T>& a, const std::vector<T>& b) {
  std::vector<T> r = a;
  for (std::size_t i = 0; i < r.size(); ++i) r[i] += b[i];
  return r;
}

template <class T>
bool vec_is_zero(const std::vector<T>& a) {
  for (const auto& v : a)
    if (!v.is_zero()) return false;
  return true;
}

/// Row vector to matrix over Q by coefficient embedding; used by rank oracles.
inline Matrix<Rational> to_rational(const Matrix<Integer>& m) {
  Matrix<Rational> r(m.rows(), m.cols(), Rational{});
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) r(i, j) = Rational(m(i, j));
  return r;
}

inline Matrix<ModP> reduce_mod(const Matrix<Integer>& m, std::uint64_t P) {
  Matrix<ModP> r(m.rows(), m.cols(), ModP(0, P));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) r(i, j) = ModP::from_mpz(m(i, j).value(), P);
  return r;
}

}  // namespace hurwitz
