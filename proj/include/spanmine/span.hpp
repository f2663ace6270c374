#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <vector>

#include "spanmine/matrix.hpp"

namespace spanmine {

/// Admissible span lengths [min_size, max_size], in tokens.
struct SpanConfig {
  std::size_t min_size = 1;
  std::size_t max_size = 20;

  static constexpr SpanConfig evaluation() { return {1, 20}; }
  static constexpr SpanConfig training() { return {1, 10}; }

  void validate() const;

  friend bool operator==(const SpanConfig&, const SpanConfig&) = default;
};

/// Half-open token interval [start, end).
struct SpanRef {
  std::size_t start = 0;
  std::size_t end = 0;

  std::size_t length() const noexcept { return end - start; }

  friend bool operator==(const SpanRef&, const SpanRef&) = default;
};

/// Number of admissible spans in a sequence of n tokens: sum_{k=a}^{min(b,n)} (n-k+1).
std::size_t span_count(std::size_t n, const SpanConfig& cfg);

/// All admissible spans ordered by (start ascending, length ascending).
std::vector<SpanRef> enumerate_spans(std::size_t n, const SpanConfig& cfg);

/// Visits spans in enumeration order without materializing them.
template <typename F>
void for_each_span(std::size_t n, const SpanConfig& cfg, F&& visit) {
  for (std::size_t s = 0; s < n; ++s) {
    const std::size_t max_len = std::min(cfg.max_size, n - s);
    for (std::size_t len = cfg.min_size; len <= max_len; ++len) visit(SpanRef{s, s + len});
  }
}

/// (n+1) x d cumulative row sums accumulated at 64-bit; row 0 is zero.
class PrefixMatrix {
 public:
  PrefixMatrix() = default;
  explicit PrefixMatrix(Matrix<double> sums) : sums_(std::move(sums)) {}

  std::size_t token_count() const noexcept { return sums_.rows() == 0 ? 0 : sums_.rows() - 1; }
  std::size_t dim() const noexcept { return sums_.cols(); }
  std::span<const double> row(std::size_t i) const noexcept { return sums_.row(i); }
  const Matrix<double>& sums() const noexcept { return sums_; }

 private:
  Matrix<double> sums_;
};

template <typename T>
PrefixMatrix build_prefix(const Matrix<T>& m) {
  Matrix<double> sums(m.rows() + 1, m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    const auto prev = sums.row(i);
    const auto src = m.row(i);
    auto dst = sums.row(i + 1);
    for (std::size_t k = 0; k < m.cols(); ++k) dst[k] = prev[k] + static_cast<double>(src[k]);
  }
  return PrefixMatrix(std::move(sums));
}

/// Mean of rows [span.start, span.end) via prefix differences. Throws on empty or
/// out-of-range spans.
std::vector<double> mean_pool(SpanRef span, const PrefixMatrix& prefix);
void mean_pool_into(SpanRef span, const PrefixMatrix& prefix, std::span<double> out);

/// row[start] followed by row[end-1]; dimension 2d.
std::vector<double> endpoint_concat(SpanRef span, const Matrix<float>& m);
void endpoint_concat_into(SpanRef span, const Matrix<float>& m, std::span<double> out);

/// Mean of all rows at 64-bit (zero vector for an empty matrix).
template <typename T>
std::vector<double> mean_rows(const Matrix<T>& m) {
  std::vector<double> out(m.cols(), 0.0);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    const auto r = m.row(i);
    for (std::size_t k = 0; k < m.cols(); ++k) out[k] += static_cast<double>(r[k]);
  }
  if (m.rows() > 0) {
    const double inv = 1.0 / static_cast<double>(m.rows());
    for (double& x : out) x *= inv;
  }
  return out;
}

}  // namespace spanmine
