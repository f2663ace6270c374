#include "spanmine/trainer.hpp"

#include <cmath>
#include <numeric>
#include <random>

#include "spanmine/error.hpp"

namespace spanmine {
namespace {

// dA += G^T E, dB += G^T C, skipping rows whose gradient is zero.
void accumulate_param_grad(const Matrix<double>& grad_rows, const Matrix<double>& base, const Matrix<double>& ctx,
                           Matrix<double>& d_a, Matrix<double>& d_b) {
  const std::size_t d = base.cols();
  for (std::size_t i = 0; i < grad_rows.rows(); ++i) {
    const auto g = grad_rows.row(i);
    bool any = false;
    for (double x : g) {
      if (x != 0.0) {
        any = true;
        break;
      }
    }
    if (!any) continue;
    const auto e = base.row(i);
    const auto c = ctx.row(i);
    for (std::size_t r = 0; r < d; ++r) {
      if (g[r] == 0.0) continue;
      auto ar = d_a.row(r);
      auto br = d_b.row(r);
      for (std::size_t k = 0; k < d; ++k) {
        ar[k] += g[r] * e[k];
        br[k] += g[r] * c[k];
      }
    }
  }
}

void check_finite(const ToyEncoderParams& p, std::size_t step) {
  if (!p.a.all_finite() || !p.b.all_finite()) {
    throw TrainingDiverged("training diverged at step " + std::to_string(step) + ": non-finite encoder weights");
  }
}

// Fisher-Yates with explicit modulo draws so the order depends only on the engine stream.
void shuffle(std::vector<std::size_t>& order, std::mt19937_64& rng) {
  for (std::size_t i = order.size(); i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng() % i);
    std::swap(order[i - 1], order[j]);
  }
}

}  // namespace

BaseTriple base_triple(const Triple& triple, const ToyEncoderParams& params) {
  const TokenSequence q = tokenize(triple.query);
  const TokenSequence p = tokenize(triple.positive);
  const TokenSequence n = tokenize(triple.negative);
  if (q.empty() || p.empty() || n.empty()) throw DegenerateInput("triple has an empty side after tokenization");
  return {toy_base_vectors_f64(q, params), toy_base_vectors_f64(p, params), toy_base_vectors_f64(n, params)};
}

ToyParamGradient toy_param_gradient(const BaseTriple& triple, const ToyEncoderParams& params, const LossConfig& cfg) {
  const Matrix<double> vq = toy_contextualize(triple.query, params);
  const Matrix<double> vp = toy_contextualize(triple.positive, params);
  const Matrix<double> vn = toy_contextualize(triple.negative, params);
  const SliceGradient g = slice_gradient(vq, vp, vn, cfg);

  ToyParamGradient out;
  out.forward = g.forward;
  out.d_a = Matrix<double>(params.dim, params.dim);
  out.d_b = Matrix<double>(params.dim, params.dim);
  accumulate_param_grad(g.d_query, triple.query, neighbor_means(triple.query, params.window), out.d_a, out.d_b);
  accumulate_param_grad(g.d_true, triple.positive, neighbor_means(triple.positive, params.window), out.d_a, out.d_b);
  accumulate_param_grad(g.d_false, triple.negative, neighbor_means(triple.negative, params.window), out.d_a, out.d_b);
  return out;
}

TripleEvaluation evaluate_triples(std::span<const Triple> triples, const ToyEncoderParams& params,
                                  const LossConfig& cfg) {
  TripleEvaluation ev;
  for (const auto& t : triples) {
    const BaseTriple b = base_triple(t, params);
    const LossOutput out = slice_forward(toy_contextualize(b.query, params), toy_contextualize(b.positive, params),
                                         toy_contextualize(b.negative, params), cfg);
    ev.mean_loss += out.loss;
    ev.mean_separation += out.sim_true - out.sim_false;
    ++ev.count;
  }
  if (ev.count > 0) {
    ev.mean_loss /= static_cast<double>(ev.count);
    ev.mean_separation /= static_cast<double>(ev.count);
  }
  return ev;
}

TrainResult train_toy(std::span<const Triple> triples, ToyEncoderParams init, const TrainHyper& hyper) {
  if (triples.empty()) throw Error("training requires at least one triple");
  if (hyper.batch_size == 0) throw Error("batch size must be positive");
  if (!std::isfinite(hyper.lr) || hyper.lr < 0.0) throw Error("learning rate must be finite and non-negative");
  init.validate();
  hyper.loss.validate();

  std::vector<BaseTriple> bases;
  bases.reserve(triples.size());
  for (std::size_t i = 0; i < triples.size(); ++i) {
    try {
      bases.push_back(base_triple(triples[i], init));
    } catch (const Error& e) {
      throw Error("triple " + std::to_string(i) + ": " + e.what());
    }
  }

  TrainResult result;
  result.params = std::move(init);
  ToyEncoderParams& p = result.params;
  const std::size_t d = p.dim;
  const std::size_t log_every = hyper.log_every == 0 ? triples.size() : hyper.log_every;

  std::mt19937_64 rng(hyper.seed);
  std::vector<std::size_t> order(triples.size());
  std::iota(order.begin(), order.end(), 0);
  shuffle(order, rng);
  std::size_t cursor = 0;

  double window_loss = 0.0, window_sep = 0.0;
  std::size_t window_count = 0;

  for (std::size_t step = 0; step < hyper.steps; ++step) {
    Matrix<double> d_a(d, d), d_b(d, d);
    for (std::size_t b = 0; b < hyper.batch_size; ++b) {
      if (cursor == order.size()) {
        shuffle(order, rng);
        cursor = 0;
      }
      const std::size_t idx = order[cursor++];
      const ToyParamGradient g = toy_param_gradient(bases[idx], p, hyper.loss);
      if (!std::isfinite(g.forward.loss)) {
        throw TrainingDiverged("training diverged at step " + std::to_string(step) + ": loss is " +
                               std::to_string(g.forward.loss) + " on triple " + std::to_string(idx));
      }
      window_loss += g.forward.loss;
      window_sep += g.forward.sim_true - g.forward.sim_false;
      ++window_count;
      for (std::size_t k = 0; k < d * d; ++k) {
        d_a.data()[k] += g.d_a.data()[k];
        d_b.data()[k] += g.d_b.data()[k];
      }
    }
    const double scale = hyper.lr / static_cast<double>(hyper.batch_size);
    for (std::size_t k = 0; k < d * d; ++k) {
      p.a.data()[k] -= scale * d_a.data()[k];
      p.b.data()[k] -= scale * d_b.data()[k];
    }
    check_finite(p, step);

    const bool last = step + 1 == hyper.steps;
    if ((step + 1) % log_every == 0 || last) {
      if (window_count > 0) {
        result.curve.push_back({step + 1, window_loss / static_cast<double>(window_count),
                                window_sep / static_cast<double>(window_count)});
      }
      window_loss = window_sep = 0.0;
      window_count = 0;
    }
  }
  return result;
}

}  // namespace spanmine
