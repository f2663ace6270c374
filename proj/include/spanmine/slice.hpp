#pragma once

#include "spanmine/matrix.hpp"
#include "spanmine/span.hpp"

namespace spanmine {

struct LossConfig {
  double lambda = 30.0;
  SpanConfig spans = SpanConfig::training();

  void validate() const;
};

struct LossOutput {
  double loss = 0.0;
  double sim_true = 0.0;
  double sim_false = 0.0;
  SpanRef argmax_true;
  SpanRef argmax_false;
};

/// log(1 + e^x) without overflow or loss of precision for large |x|.
double softplus(double x);

/// Logistic sigmoid, stable for large |x|.
double sigmoid(double x);

/// Span-max late-interaction loss for one triple of token embeddings:
///   q = mean of query rows
///   sim_true  = max over spans x of p_true  of (1 + cos(q, mean(x))) / 2
///   sim_false = max over spans x of p_false of (1 + cos(q, mean(x))) / 2
///   L = -lambda * sim_true + log(e^{lambda sim_true} + e^{lambda sim_false})
///     = softplus(lambda * (sim_false - sim_true))
/// Throws DegenerateInput if a passage has no admissible span or the query is empty.
LossOutput slice_forward(const Matrix<double>& query, const Matrix<double>& p_true, const Matrix<double>& p_false,
                         const LossConfig& cfg);

struct SliceGradient {
  LossOutput forward;
  Matrix<double> d_query;  // same shape as the query rows
  Matrix<double> d_true;
  Matrix<double> d_false;
};

/// Analytic gradient of the loss w.r.t. every input row. The max is differentiated as a
/// subgradient: only rows of the argmax span (first span on ties) receive gradient.
SliceGradient slice_gradient(const Matrix<double>& query, const Matrix<double>& p_true, const Matrix<double>& p_false,
                             const LossConfig& cfg);

}  // namespace spanmine
