#include <doctest.h>

#include "oracles.hpp"
#include "spanmine/error.hpp"
#include "spanmine/synth.hpp"
#include "spanmine/trainer.hpp"

using namespace spanmine;

namespace {

std::vector<Triple> small_triples(std::size_t count, std::uint64_t seed) {
  SynthParams p;
  p.count = count;
  p.seed = seed;
  p.noise_rates = {0.0};
  p.context_min = 4;
  p.context_max = 8;
  return synth_generate(p).triples;
}

}  // namespace

TEST_CASE("parameter gradients match central differences") {
  const auto triples = small_triples(8, 1);
  for (const auto& t : triples) {
    auto params = ToyEncoderParams::mixing(6, 1, 2, 1.0);
    const auto base = base_triple(t, params);
    const LossConfig cfg{4.0, {1, 10}};
    const auto g = toy_param_gradient(base, params, cfg);
    auto loss = [&] {
      return slice_forward(toy_contextualize(base.query, params), toy_contextualize(base.positive, params),
                           toy_contextualize(base.negative, params), cfg)
          .loss;
    };
    CHECK(g.forward.loss == doctest::Approx(loss()).epsilon(1e-14));
    CHECK(oracle::relative_error(g.d_a, oracle::central_difference(params.a, loss, 1e-5)) < 1e-4);
    CHECK(oracle::relative_error(g.d_b, oracle::central_difference(params.b, loss, 1e-5)) < 1e-4);
  }
}

TEST_CASE("zero learning rate leaves parameters unchanged and the curve flat") {
  const auto triples = small_triples(6, 2);
  const auto init = ToyEncoderParams::mixing(8, 2, 3, 1.0);
  TrainHyper h;
  h.lr = 0.0;
  h.steps = 12;
  h.log_every = 6;
  const auto r = train_toy(triples, init, h);
  CHECK(r.params == init);
  REQUIRE(r.curve.size() == 2);
  CHECK(r.curve[0].mean_loss == doctest::Approx(r.curve[1].mean_loss).epsilon(1e-12));
}

TEST_CASE("training is deterministic under a seed") {
  const auto triples = small_triples(10, 3);
  const auto init = ToyEncoderParams::mixing(8, 2, 4, 1.0);
  TrainHyper h;
  h.steps = 15;
  h.seed = 9;
  const auto a = train_toy(triples, init, h);
  const auto b = train_toy(triples, init, h);
  CHECK(a.params == b.params);
  h.seed = 10;
  CHECK_FALSE(train_toy(triples, init, h).params == a.params);
}

TEST_CASE("curve points cover the requested windows") {
  const auto triples = small_triples(5, 4);
  TrainHyper h;
  h.steps = 12;
  h.batch_size = 2;
  const auto r = train_toy(triples, ToyEncoderParams::mixing(8, 2, 0, 1.0), h);
  REQUIRE_FALSE(r.curve.empty());
  CHECK(r.curve.back().step == 12);
  for (const auto& p : r.curve) CHECK(p.mean_loss > 0.0);
}

TEST_CASE("divergence is reported") {
  const auto triples = small_triples(4, 5);
  TrainHyper h;
  h.lr = 1e305;
  h.steps = 10;
  CHECK_THROWS_AS(train_toy(triples, ToyEncoderParams::mixing(8, 2, 0, 1.0), h), TrainingDiverged);
}

TEST_CASE("invalid training input") {
  CHECK_THROWS_AS(train_toy({}, ToyEncoderParams::mixing(8, 2, 0, 1.0), {}), Error);
  const Triple empty{"...", "a b", "c d"};
  CHECK_THROWS_AS(base_triple(empty, ToyEncoderParams::mixing(8, 2, 0, 1.0)), Error);
}

TEST_CASE("triple evaluation averages loss and separation") {
  const auto triples = small_triples(6, 6);
  const auto p = ToyEncoderParams::mixing(8, 2, 1, 1.0);
  const auto e = evaluate_triples(triples, p, {});
  double loss = 0.0, sep = 0.0;
  for (const auto& t : triples) {
    const auto b = base_triple(t, p);
    const auto out = slice_forward(toy_contextualize(b.query, p), toy_contextualize(b.positive, p),
                                   toy_contextualize(b.negative, p), {});
    loss += out.loss;
    sep += out.sim_true - out.sim_false;
  }
  CHECK(e.count == 6);
  CHECK(e.mean_loss == doctest::Approx(loss / 6).epsilon(1e-12));
  CHECK(e.mean_separation == doctest::Approx(sep / 6).epsilon(1e-12));
}
