#include "spanmine/slice.hpp"

#include <cmath>
#include <string>

#include "spanmine/error.hpp"
#include "spanmine/similarity.hpp"

namespace spanmine {
namespace {

void check_inputs(const Matrix<double>& q, const Matrix<double>& pt, const Matrix<double>& pf) {
  if (q.rows() == 0) throw DegenerateInput("query has no tokens");
  if (pt.cols() != q.cols() || pf.cols() != q.cols()) {
    throw DimensionMismatch("query, positive and negative embeddings must share one dimension");
  }
}

SpanArgmax argmax_or_throw(std::span<const double> qv, const Matrix<double>& passage, const SpanConfig& cfg,
                           const char* which) {
  const auto best = best_mean_span(qv, build_prefix(passage), cfg);
  if (!best) {
    throw DegenerateInput(std::string(which) + " passage with " + std::to_string(passage.rows()) +
                          " tokens has no admissible span");
  }
  return *best;
}

// Accumulates coef * d sim / d(rows) into d_rows for the argmax span and returns coef * d sim / d q.
void backprop_similarity(std::span<const double> qv, const Matrix<double>& passage, SpanRef span, double coef,
                         Matrix<double>& d_rows, std::vector<double>& d_qv) {
  const std::size_t d = qv.size();
  const double len = static_cast<double>(span.length());
  std::vector<double> m(d, 0.0);
  for (std::size_t i = span.start; i < span.end; ++i) {
    const auto r = passage.row(i);
    for (std::size_t k = 0; k < d; ++k) m[k] += r[k];
  }
  for (double& x : m) x /= len;

  double uu = 0.0, mm = 0.0, um = 0.0;
  for (std::size_t k = 0; k < d; ++k) {
    uu += qv[k] * qv[k];
    mm += m[k] * m[k];
    um += qv[k] * m[k];
  }
  const double nu = std::sqrt(uu);
  const double nm = std::sqrt(mm);
  if (nu < kDegenerateNorm || nm < kDegenerateNorm) return;  // similarity is the constant 0 there
  const double cos = um / (nu * nm);

  // sim = (1 + cos) / 2
  for (std::size_t k = 0; k < d; ++k) {
    const double dm = 0.5 * (qv[k] / (nu * nm) - cos * m[k] / mm);
    const double du = 0.5 * (m[k] / (nu * nm) - cos * qv[k] / uu);
    d_qv[k] += coef * du;
    const double per_row = coef * dm / len;
    for (std::size_t i = span.start; i < span.end; ++i) d_rows(i, k) += per_row;
  }
}

}  // namespace

void LossConfig::validate() const {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw Error("lambda must be a positive finite number");
  spans.validate();
}

double softplus(double x) {
  if (x > 0.0) return x + std::log1p(std::exp(-x));
  return std::log1p(std::exp(x));
}

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

LossOutput slice_forward(const Matrix<double>& query, const Matrix<double>& p_true, const Matrix<double>& p_false,
                         const LossConfig& cfg) {
  cfg.validate();
  check_inputs(query, p_true, p_false);
  const std::vector<double> qv = mean_rows(query);
  const SpanArgmax t = argmax_or_throw(qv, p_true, cfg.spans, "positive");
  const SpanArgmax f = argmax_or_throw(qv, p_false, cfg.spans, "negative");
  LossOutput out;
  out.sim_true = t.score;
  out.sim_false = f.score;
  out.argmax_true = t.span;
  out.argmax_false = f.span;
  out.loss = softplus(cfg.lambda * (out.sim_false - out.sim_true));
  return out;
}

SliceGradient slice_gradient(const Matrix<double>& query, const Matrix<double>& p_true, const Matrix<double>& p_false,
                             const LossConfig& cfg) {
  SliceGradient g;
  g.forward = slice_forward(query, p_true, p_false, cfg);
  const std::size_t d = query.cols();
  g.d_query = Matrix<double>(query.rows(), d);
  g.d_true = Matrix<double>(p_true.rows(), d);
  g.d_false = Matrix<double>(p_false.rows(), d);

  // dL/dsim_true = -lambda * s, dL/dsim_false = +lambda * s, s = sigmoid(lambda (sf - st))
  const double s = sigmoid(cfg.lambda * (g.forward.sim_false - g.forward.sim_true));
  const std::vector<double> qv = mean_rows(query);
  std::vector<double> d_qv(d, 0.0);
  backprop_similarity(qv, p_true, g.forward.argmax_true, -cfg.lambda * s, g.d_true, d_qv);
  backprop_similarity(qv, p_false, g.forward.argmax_false, cfg.lambda * s, g.d_false, d_qv);

  const double inv = 1.0 / static_cast<double>(query.rows());
  for (std::size_t i = 0; i < query.rows(); ++i) {
    auto r = g.d_query.row(i);
    for (std::size_t k = 0; k < d; ++k) r[k] = d_qv[k] * inv;
  }
  return g;
}

}  // namespace spanmine
