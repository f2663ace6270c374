#include "spanmine/span.hpp"

#include <string>

#include "spanmine/error.hpp"

namespace spanmine {
namespace {

void check_span(SpanRef span, std::size_t n) {
  if (span.end <= span.start) throw DegenerateInput("empty span");
  if (span.end > n) {
    throw Error("span [" + std::to_string(span.start) + ", " + std::to_string(span.end) + ") exceeds " +
                std::to_string(n) + " tokens");
  }
}

}  // namespace

void SpanConfig::validate() const {
  if (min_size < 1 || min_size > max_size) {
    throw Error("span config requires 1 <= min_size <= max_size (got " + std::to_string(min_size) + ", " +
                std::to_string(max_size) + ")");
  }
}

std::size_t span_count(std::size_t n, const SpanConfig& cfg) {
  cfg.validate();
  const std::size_t hi = std::min(cfg.max_size, n);
  if (n < cfg.min_size) return 0;
  // sum_{k=a}^{hi} (n+1-k) = (hi-a+1)(n+1) - (a+hi)(hi-a+1)/2
  const std::size_t terms = hi - cfg.min_size + 1;
  return terms * (n + 1) - (cfg.min_size + hi) * terms / 2;
}

std::vector<SpanRef> enumerate_spans(std::size_t n, const SpanConfig& cfg) {
  std::vector<SpanRef> out;
  out.reserve(span_count(n, cfg));
  for_each_span(n, cfg, [&](SpanRef s) { out.push_back(s); });
  return out;
}

void mean_pool_into(SpanRef span, const PrefixMatrix& prefix, std::span<double> out) {
  check_span(span, prefix.token_count());
  if (out.size() != prefix.dim()) throw DimensionMismatch("mean_pool output has wrong dimension");
  const auto hi = prefix.row(span.end);
  const auto lo = prefix.row(span.start);
  const double inv = 1.0 / static_cast<double>(span.length());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = (hi[k] - lo[k]) * inv;
}

std::vector<double> mean_pool(SpanRef span, const PrefixMatrix& prefix) {
  std::vector<double> out(prefix.dim());
  mean_pool_into(span, prefix, out);
  return out;
}

void endpoint_concat_into(SpanRef span, const Matrix<float>& m, std::span<double> out) {
  check_span(span, m.rows());
  const std::size_t d = m.cols();
  if (out.size() != 2 * d) throw DimensionMismatch("endpoint_concat output has wrong dimension");
  const auto first = m.row(span.start);
  const auto last = m.row(span.end - 1);
  for (std::size_t k = 0; k < d; ++k) {
    out[k] = first[k];
    out[d + k] = last[k];
  }
}

std::vector<double> endpoint_concat(SpanRef span, const Matrix<float>& m) {
  std::vector<double> out(2 * m.cols());
  endpoint_concat_into(span, m, out);
  return out;
}

}  // namespace spanmine
