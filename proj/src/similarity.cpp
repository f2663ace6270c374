#include "spanmine/similarity.hpp"

#include <algorithm>

#include "spanmine/threads.hpp"

namespace spanmine {
namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) acc += a[k] * b[k];
  return acc;
}

double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

// Running argmax with first-wins ties.
struct Best {
  SpanRef span;
  double score = -1.0;

  void offer(SpanRef s, double score_) {
    if (score_ > score) {
      score = score_;
      span = s;
    }
  }
};

double score_from(double dot_value, double span_norm, double query_norm) {
  if (span_norm < kDegenerateNorm || query_norm < kDegenerateNorm) return 0.0;
  return normalize_cosine(dot_value / (span_norm * query_norm));
}

Best scan_lazy_mean(std::span<const double> q, const PrefixMatrix& prefix, const SpanConfig& cfg,
                    std::span<const double> stored_norms) {
  const std::size_t n = prefix.token_count();
  const std::size_t d = prefix.dim();
  const double qn = norm(q);
  // P_i . q for every prefix row; a span's dot product is then a difference of two scalars.
  std::vector<double> pq(n + 1);
  for (std::size_t i = 0; i <= n; ++i) pq[i] = dot(prefix.row(i), q);

  Best best;
  std::size_t j = 0;
  for_each_span(n, cfg, [&](SpanRef s) {
    const double len = static_cast<double>(s.length());
    const double sum_dot = pq[s.end] - pq[s.start];
    double mean_norm;
    if (!stored_norms.empty()) {
      mean_norm = stored_norms[j];
    } else {
      const auto hi = prefix.row(s.end);
      const auto lo = prefix.row(s.start);
      double n2 = 0.0;
      for (std::size_t k = 0; k < d; ++k) {
        const double diff = hi[k] - lo[k];
        n2 += diff * diff;
      }
      mean_norm = std::sqrt(n2) / len;
    }
    best.offer(s, score_from(sum_dot / len, mean_norm, qn));
    ++j;
  });
  return best;
}

Best scan_lazy_endpoint(std::span<const double> q, const Matrix<float>& rows, const SpanConfig& cfg) {
  const std::size_t n = rows.rows();
  const std::size_t d = rows.cols();
  const double qn = norm(q);
  std::vector<double> left(n), right(n), sq(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto r = rows.row(i);
    double l = 0.0, rr = 0.0, s = 0.0;
    for (std::size_t k = 0; k < d; ++k) {
      const double x = r[k];
      l += x * q[k];
      rr += x * q[d + k];
      s += x * x;
    }
    left[i] = l;
    right[i] = rr;
    sq[i] = s;
  }
  Best best;
  for_each_span(n, cfg, [&](SpanRef s) {
    const std::size_t last = s.end - 1;
    best.offer(s, score_from(left[s.start] + right[last], std::sqrt(sq[s.start] + sq[last]), qn));
  });
  return best;
}

Best scan_materialized(std::span<const double> q, const SpanIndex& index) {
  const double qn = norm(q);
  const auto& mat = index.materialized();
  const auto norms = index.norms();
  Best best;
  std::size_t j = 0;
  for_each_span(index.token_count(), index.options().spans, [&](SpanRef s) {
    const auto row = mat.row(j);
    double dt = 0.0, n2 = 0.0;
    for (std::size_t k = 0; k < row.size(); ++k) {
      const double x = row[k];
      dt += x * q[k];
      n2 += x * x;
    }
    best.offer(s, score_from(dt, norms.empty() ? std::sqrt(n2) : norms[j], qn));
    ++j;
  });
  return best;
}

}  // namespace

std::vector<double> represent_query(const Matrix<float>& query, Representation representation) {
  if (query.rows() == 0) throw DegenerateInput("query has no tokens");
  if (representation == Representation::mean_pool) return mean_rows(query);
  return endpoint_concat(SpanRef{0, query.rows()}, query);
}

std::optional<SpanArgmax> best_mean_span(std::span<const double> query, const PrefixMatrix& prefix,
                                         const SpanConfig& cfg) {
  if (query.size() != prefix.dim()) {
    throw DimensionMismatch("query dimension " + std::to_string(query.size()) + " != " + std::to_string(prefix.dim()));
  }
  if (span_count(prefix.token_count(), cfg) == 0) return std::nullopt;
  const Best b = scan_lazy_mean(query, prefix, cfg, {});
  return SpanArgmax{b.span, b.score};
}

std::optional<ScoredSpan> best_span_match(std::span<const double> query, const SpanIndex& index) {
  if (query.size() != index.dim()) {
    throw DimensionMismatch("query dimension " + std::to_string(query.size()) + " != index dimension " +
                            std::to_string(index.dim()));
  }
  if (index.span_count() == 0) return std::nullopt;

  Best best;
  const auto& o = index.options();
  if (o.mode == StorageMode::materialized) {
    best = scan_materialized(query, index);
  } else if (o.representation == Representation::mean_pool) {
    best = scan_lazy_mean(query, index.prefix(), o.spans, index.norms());
  } else {
    best = scan_lazy_endpoint(query, index.embeddings(), o.spans);
  }
  const auto [lo, hi] = index.char_range(best.span);
  return ScoredSpan{index.doc_id(), best.span, best.score, lo, hi};
}

std::vector<ScoredSpan> top_k_search(std::span<const double> query, std::span<const SpanIndex> corpus,
                                     std::size_t k, std::size_t threads) {
  if (k == 0) throw Error("top-k requires k >= 1");
  std::vector<std::optional<ScoredSpan>> per_doc(corpus.size());
  parallel_for(corpus.size(), threads, [&](std::size_t i) { per_doc[i] = best_span_match(query, corpus[i]); });

  std::vector<ScoredSpan> hits;
  hits.reserve(corpus.size());
  for (auto& h : per_doc) {
    if (h) hits.push_back(std::move(*h));
  }
  std::stable_sort(hits.begin(), hits.end(), [](const ScoredSpan& a, const ScoredSpan& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.doc_id < b.doc_id;
  });
  if (hits.size() > k) hits.resize(k);
  return hits;
}

}  // namespace spanmine
