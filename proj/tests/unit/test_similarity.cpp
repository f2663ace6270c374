#include <doctest.h>

#include "oracles.hpp"
#include "spanmine/encoder.hpp"
#include "spanmine/error.hpp"
#include "spanmine/similarity.hpp"

using namespace spanmine;

namespace {

TokenSequence dummy_tokens(std::size_t n) {
  std::vector<Token> t;
  for (std::size_t i = 0; i < n; ++i) t.push_back({"w", 2 * i, 2 * i + 1});
  return TokenSequence(std::move(t));
}

SpanIndex index_of(const Matrix<float>& m, SpanIndexOptions opt, std::string id = "d") {
  return SpanIndex::build(std::move(id), dummy_tokens(m.rows()), EmbeddingMatrix(m), opt);
}

std::vector<double> random_vec(std::mt19937_64& rng, std::size_t d) {
  const auto m = oracle::random_matrix(rng, 1, d);
  return {m.data().begin(), m.data().end()};
}

}  // namespace

TEST_CASE("normalized cosine examples") {
  CHECK(normalized_cosine(std::vector<double>{1, 0}, std::vector<double>{1, 0}) == 1.0);
  CHECK(normalized_cosine(std::vector<double>{1, 0}, std::vector<double>{-1, 0}) == 0.0);
  CHECK(normalized_cosine(std::vector<double>{1, 0}, std::vector<double>{0, 1}) == 0.5);
}

TEST_CASE("degenerate and mismatched inputs") {
  const std::vector<double> z{0, 0}, u{1, 2};
  const auto r = normalized_cosine_checked(std::span<const double>(z), std::span<const double>(u));
  CHECK(r.score == 0.0);
  CHECK(r.degenerate);
  const std::vector<double> three{1, 2, 3};
  CHECK_THROWS_AS(normalized_cosine(u, three), DimensionMismatch);
}

TEST_CASE("cosine properties: range, symmetry, scale invariance") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 200; ++i) {
    const auto u = random_vec(rng, 7);
    const auto v = random_vec(rng, 7);
    const double s = normalized_cosine(u, v);
    CHECK(s >= 0.0);
    CHECK(s <= 1.0);
    CHECK(s == normalized_cosine(v, u));
    auto au = u, bv = v;
    for (double& x : au) x *= 3.7;
    for (double& x : bv) x *= 0.02;
    CHECK(std::fabs(normalized_cosine(au, bv) - s) < 1e-12);
  }
}

TEST_CASE("best span equals brute force on random documents") {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = oracle::uniform(rng, 1, 30);
    const std::size_t d = oracle::uniform(rng, 2, 8);
    const std::size_t a = oracle::uniform(rng, 1, 3);
    const std::size_t b = a + oracle::uniform(rng, 0, 5);
    const auto doc = oracle::random_matrix_f(rng, n, d);
    for (auto mode : {StorageMode::lazy, StorageMode::materialized}) {
      for (bool norms : {false, true}) {
        const auto q = random_vec(rng, d);
        const auto idx = index_of(doc, {{a, b}, Representation::mean_pool, mode, norms});
        const auto got = best_span_match(q, idx);
        const auto want = oracle::brute_best_mean(q, doc, a, b);
        REQUIRE(got.has_value() == want.found);
        if (!want.found) continue;
        CHECK(got->span.start == want.start);
        CHECK(got->span.end == want.end);
        // Materialized span vectors are stored as float32.
        CHECK(std::fabs(got->score - want.score) < (mode == StorageMode::lazy ? 1e-9 : 1e-6));
      }
      const auto q2 = random_vec(rng, 2 * d);
      const auto idx2 = index_of(doc, {{a, b}, Representation::endpoint_concat, mode, false});
      const auto got2 = best_span_match(q2, idx2);
      const auto want2 = oracle::brute_best_endpoint(q2, doc, a, b);
      REQUIRE(got2.has_value() == want2.found);
      if (!want2.found) continue;
      CHECK(got2->span.start == want2.start);
      CHECK(got2->span.end == want2.end);
      CHECK(std::fabs(got2->score - want2.score) < 1e-9);
    }
  }
}

TEST_CASE("ties go to the first span in enumeration order") {
  Matrix<float> doc(4, 2, {1, 0, 1, 0, 1, 0, 1, 0});
  const auto idx = index_of(doc, {{1, 4}, Representation::mean_pool, StorageMode::lazy, false});
  const std::vector<double> q{2, 0};
  const auto best = best_span_match(q, idx);
  REQUIRE(best);
  CHECK(best->span == SpanRef{0, 1});
  CHECK(best->score == doctest::Approx(1.0));
}

TEST_CASE("documents shorter than min_size have no match") {
  Matrix<float> doc(2, 2, {1, 0, 0, 1});
  const auto idx = index_of(doc, {{3, 5}, Representation::mean_pool, StorageMode::lazy, false});
  CHECK_FALSE(best_span_match(std::vector<double>{1, 0}, idx).has_value());
  CHECK_THROWS_AS(best_span_match(std::vector<double>{1, 0, 0}, idx), DimensionMismatch);
}

TEST_CASE("zero rows score 0 instead of failing") {
  Matrix<float> doc(3, 2, {0, 0, 0, 0, 0, 0});
  const auto idx = index_of(doc, {{1, 3}, Representation::mean_pool, StorageMode::lazy, false});
  const auto best = best_span_match(std::vector<double>{1, 0}, idx);
  REQUIRE(best);
  CHECK(best->score == 0.0);
}

TEST_CASE("enlarging the span range never lowers the best score") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const auto doc = oracle::random_matrix_f(rng, 20, 4);
    const auto q = random_vec(rng, 4);
    double prev = -1.0;
    for (std::size_t b = 1; b <= 20; ++b) {
      const auto s = best_span_match(q, index_of(doc, {{1, b}, Representation::mean_pool, StorageMode::lazy, false}));
      CHECK(s->score >= prev);
      prev = s->score;
    }
  }
}

TEST_CASE("planted phrase is found with the identity encoder") {
  const ToyEncoder enc(ToyEncoderParams::identity(64, 0, 0));
  const std::string text = "Catching a glimpse of men who play soccer on the beach at dawn.";
  auto doc = enc.encode(text);
  const auto idx = SpanIndex::build("d", doc.tokens, doc.vectors, {}, text);
  const auto q = enc.encode("play soccer on the beach");
  const auto best = best_span_match(represent_query(q.vectors, Representation::mean_pool), idx);
  REQUIRE(best);
  CHECK(text.substr(best->char_start, best->char_end - best->char_start) == "play soccer on the beach");
  CHECK(best->score == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("top-k ranks per-document maxima") {
  std::mt19937_64 rng(8);
  std::vector<SpanIndex> corpus;
  std::vector<Matrix<float>> docs;
  for (int i = 0; i < 10; ++i) {
    docs.push_back(oracle::random_matrix_f(rng, oracle::uniform(rng, 1, 25), 5));
    corpus.push_back(index_of(docs.back(), {{1, 6}, Representation::mean_pool, StorageMode::lazy, false},
                              "doc" + std::to_string(i)));
  }
  const auto q = random_vec(rng, 5);
  std::vector<std::pair<double, std::string>> want;
  for (std::size_t i = 0; i < docs.size(); ++i) {
    want.emplace_back(oracle::brute_best_mean(q, docs[i], 1, 6).score, "doc" + std::to_string(i));
  }
  std::sort(want.begin(), want.end(), [](const auto& x, const auto& y) {
    return x.first != y.first ? x.first > y.first : x.second < y.second;
  });
  for (std::size_t k : {1, 3, 10, 25}) {
    const auto got = top_k_search(q, corpus, k, 3);
    REQUIRE(got.size() == std::min<std::size_t>(k, 10));
    for (std::size_t i = 0; i < got.size(); ++i) {
      CHECK(got[i].doc_id == want[i].second);
      CHECK(std::fabs(got[i].score - want[i].first) < 1e-9);
    }
  }
  CHECK(top_k_search(q, std::span<const SpanIndex>{}, 5).empty());
  CHECK_THROWS_AS(top_k_search(q, corpus, 0), Error);
  const auto one = top_k_search(q, std::span<const SpanIndex>(corpus.data(), 1), 1);
  CHECK(one[0].score == best_span_match(q, corpus[0])->score);
}

TEST_CASE("score ties across documents are ordered by doc id") {
  Matrix<float> doc(1, 2, {1, 0});
  std::vector<SpanIndex> corpus;
  for (const char* id : {"b", "c", "a"}) corpus.push_back(index_of(doc, {{1, 1}, {}, StorageMode::lazy, false}, id));
  const auto got = top_k_search(std::vector<double>{1, 0}, corpus, 3);
  CHECK(got[0].doc_id == "a");
  CHECK(got[1].doc_id == "b");
  CHECK(got[2].doc_id == "c");
}

TEST_CASE("query representations") {
  Matrix<float> q(3, 2, {1, 2, 3, 4, 5, 6});
  CHECK(represent_query(q, Representation::mean_pool) == std::vector<double>{3, 4});
  CHECK(represent_query(q, Representation::endpoint_concat) == std::vector<double>{1, 2, 5, 6});
}
