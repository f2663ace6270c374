#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "spanmine/error.hpp"
#include "spanmine/span_index.hpp"

namespace spanmine {

/// Norms below this are treated as zero vectors.
inline constexpr double kDegenerateNorm = 1e-12;

struct CosineResult {
  double score = 0.0;       // (1 + cos) / 2, clamped to [0, 1]
  bool degenerate = false;  // a norm was below kDegenerateNorm; score is 0
};

/// Maps a cosine to [0, 1] via (1 + cos) / 2.
inline double normalize_cosine(double cos) { return std::clamp(0.5 * (1.0 + cos), 0.0, 1.0); }

template <typename T, typename U>
CosineResult normalized_cosine_checked(std::span<const T> u, std::span<const U> v) {
  if (u.size() != v.size()) {
    throw DimensionMismatch("cosine of vectors with dimensions " + std::to_string(u.size()) + " and " +
                            std::to_string(v.size()));
  }
  double dot = 0.0, uu = 0.0, vv = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double a = static_cast<double>(u[i]);
    const double b = static_cast<double>(v[i]);
    dot += a * b;
    uu += a * a;
    vv += b * b;
  }
  const double nu = std::sqrt(uu);
  const double nv = std::sqrt(vv);
  if (nu < kDegenerateNorm || nv < kDegenerateNorm) return {0.0, true};
  return {normalize_cosine(dot / (nu * nv)), false};
}

/// Cosine similarity mapped to [0, 1]. Zero-norm inputs score 0.
template <typename T, typename U>
double normalized_cosine(std::span<const T> u, std::span<const U> v) {
  return normalized_cosine_checked(u, v).score;
}

inline double normalized_cosine(const std::vector<double>& u, const std::vector<double>& v) {
  return normalized_cosine(std::span<const double>(u), std::span<const double>(v));
}

struct ScoredSpan {
  std::string doc_id;
  SpanRef span;
  double score = 0.0;
  std::size_t char_start = 0;
  std::size_t char_end = 0;
};

/// Query representation matching a span representation: mean of all rows, or first row
/// concatenated with last row.
std::vector<double> represent_query(const Matrix<float>& query, Representation representation);

/// Highest-scoring indexed span; the first in enumeration order wins ties. Empty when the
/// index holds no spans.
std::optional<ScoredSpan> best_span_match(std::span<const double> query, const SpanIndex& index);

/// Best span per document, top k documents by score descending; equal scores are ordered by
/// doc id. `threads` = 0 uses worker_threads().
std::vector<ScoredSpan> top_k_search(std::span<const double> query, std::span<const SpanIndex> corpus,
                                     std::size_t k, std::size_t threads = 0);

/// Argmax of the normalized cosine between `query` and the mean of each admissible span,
/// scanned over prefix sums. Shared by search and the training objective.
struct SpanArgmax {
  SpanRef span;
  double score = 0.0;
};
std::optional<SpanArgmax> best_mean_span(std::span<const double> query, const PrefixMatrix& prefix,
                                         const SpanConfig& cfg);

}  // namespace spanmine
