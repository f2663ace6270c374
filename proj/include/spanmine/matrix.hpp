#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "spanmine/error.hpp"

namespace spanmine {

/// Dense row-major matrix. Rows are exposed as spans.
template <typename T>
class Matrix {
 public:
  using value_type = T;

  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, T{}) {}
  Matrix(std::size_t rows, std::size_t cols, std::vector<T> data)
      : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows_ * cols_) {
      throw DimensionMismatch("matrix data size " + std::to_string(data_.size()) + " != " +
                              std::to_string(rows_) + "x" + std::to_string(cols_));
    }
  }

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T{1};
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return rows_ == 0; }

  T& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }
  const T& operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }

  std::span<T> row(std::size_t r) noexcept { return {data_.data() + r * cols_, cols_}; }
  std::span<const T> row(std::size_t r) const noexcept { return {data_.data() + r * cols_, cols_}; }

  std::span<T> data() noexcept { return data_; }
  std::span<const T> data() const noexcept { return data_; }

  bool all_finite() const noexcept {
    for (const T& x : data_) {
      if (!std::isfinite(x)) return false;
    }
    return true;
  }

  template <typename U>
  Matrix<U> cast() const {
    std::vector<U> out(data_.begin(), data_.end());
    return Matrix<U>(rows_, cols_, std::move(out));
  }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

/// Per-token contextualized vectors for one document: n rows of dimension d, stored as float32.
class EmbeddingMatrix : public Matrix<float> {
 public:
  EmbeddingMatrix() = default;
  EmbeddingMatrix(std::size_t rows, std::size_t dim, std::string doc_id = {})
      : Matrix<float>(rows, dim), doc_id_(std::move(doc_id)) {}
  EmbeddingMatrix(std::size_t rows, std::size_t dim, std::vector<float> data, std::string doc_id = {})
      : Matrix<float>(rows, dim, std::move(data)), doc_id_(std::move(doc_id)) {}
  explicit EmbeddingMatrix(Matrix<float> m, std::string doc_id = {})
      : Matrix<float>(std::move(m)), doc_id_(std::move(doc_id)) {}

  std::size_t dim() const noexcept { return cols(); }
  const std::string& doc_id() const noexcept { return doc_id_; }
  void set_doc_id(std::string id) { doc_id_ = std::move(id); }

  friend bool operator==(const EmbeddingMatrix&, const EmbeddingMatrix&) = default;

 private:
  std::string doc_id_;
};

inline Matrix<double> to_f64(const Matrix<float>& m) { return m.cast<double>(); }

inline EmbeddingMatrix to_embedding(const Matrix<double>& m, std::string doc_id = {}) {
  return EmbeddingMatrix(m.cast<float>(), std::move(doc_id));
}

}  // namespace spanmine
