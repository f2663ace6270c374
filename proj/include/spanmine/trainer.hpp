#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "spanmine/dataset.hpp"
#include "spanmine/slice.hpp"
#include "spanmine/toy_encoder.hpp"

namespace spanmine {

/// Base vectors of one tokenized triple. Base vectors depend only on the encoder seed, so they
/// stay fixed while A and B are trained.
struct BaseTriple {
  Matrix<double> query;
  Matrix<double> positive;
  Matrix<double> negative;
};

/// Throws if any side of the triple tokenizes to nothing.
BaseTriple base_triple(const Triple& triple, const ToyEncoderParams& params);

struct ToyParamGradient {
  LossOutput forward;
  Matrix<double> d_a;
  Matrix<double> d_b;
};

/// Loss and its gradient w.r.t. the toy encoder's A and B for one triple:
/// dL/dA = sum_i g_i e_i^T, dL/dB = sum_i g_i c_i^T over the rows of all three sequences.
ToyParamGradient toy_param_gradient(const BaseTriple& triple, const ToyEncoderParams& params, const LossConfig& cfg);

struct TrainHyper {
  double lr = 0.1;
  std::size_t steps = 200;
  std::uint64_t seed = 0;
  std::size_t batch_size = 1;
  std::size_t log_every = 0;  // steps per curve point; 0 = one pass over the triples
  LossConfig loss;
};

struct CurvePoint {
  std::size_t step = 0;          // steps completed at the end of the window
  double mean_loss = 0.0;        // over the triples visited in the window, before their update
  double mean_separation = 0.0;  // mean (sim_true - sim_false) over the same triples
};

struct TrainResult {
  ToyEncoderParams params;
  std::vector<CurvePoint> curve;
};

struct TripleEvaluation {
  double mean_loss = 0.0;
  double mean_separation = 0.0;
  std::size_t count = 0;
};

TripleEvaluation evaluate_triples(std::span<const Triple> triples, const ToyEncoderParams& params,
                                  const LossConfig& cfg);

/// Plain gradient descent on A and B. Each step draws `batch_size` triples from a seeded
/// shuffled order, re-selects argmax spans under the current parameters, and applies the
/// mean gradient. Throws TrainingDiverged on a non-finite loss or parameter.
TrainResult train_toy(std::span<const Triple> triples, ToyEncoderParams init, const TrainHyper& hyper);

}  // namespace spanmine
