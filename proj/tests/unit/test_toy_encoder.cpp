#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "spanmine/encoder.hpp"
#include "spanmine/error.hpp"
#include "spanmine/toy_encoder.hpp"
#include "test_util.hpp"

using namespace spanmine;

namespace {

double norm(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

double max_diff(const Matrix<double>& a, const Matrix<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.data().size(); ++i) m = std::max(m, std::fabs(a.data()[i] - b.data()[i]));
  return m;
}

}  // namespace

TEST_CASE("base vectors are unit norm and keyed by text") {
  const auto p = ToyEncoderParams::identity(64, 2, 0);
  const auto base = toy_base_vectors_f64(tokenize("the beach and the beach"), p);
  for (std::size_t i = 0; i < base.rows(); ++i) CHECK(norm(base.row(i)) == doctest::Approx(1.0).epsilon(1e-12));
  for (std::size_t k = 0; k < 64; ++k) {
    CHECK(base(1, k) == base(4, k));
    CHECK(base(0, k) == base(3, k));
  }
  const auto f = toy_base_vectors(tokenize("beach"), p);
  CHECK(norm(to_f64(f).row(0)) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("different seeds give different base vectors") {
  std::vector<double> a(64), b(64);
  toy_base_vector("soccer", 7, a);
  toy_base_vector("soccer", 8, b);
  CHECK(a != b);
}

TEST_CASE("identity parameters reproduce the base vectors") {
  const auto p = ToyEncoderParams::identity(16, 2, 3);
  const auto base = toy_base_vectors_f64(tokenize("a b c d e"), p);
  CHECK(max_diff(toy_contextualize(base, p), base) == 0.0);
}

TEST_CASE("single token has no context term") {
  auto p = ToyEncoderParams::mixing(8, 3, 1, 2.0);
  const auto base = toy_base_vectors_f64(tokenize("alone"), p);
  const auto v = toy_contextualize(base, p);
  for (std::size_t r = 0; r < 8; ++r) {
    double expected = 0.0;
    for (std::size_t k = 0; k < 8; ++k) expected += p.a(r, k) * base(0, k);
    CHECK(v(0, r) == doctest::Approx(expected).epsilon(1e-14));
  }
}

TEST_CASE("neighbor mean of the middle of three tokens with window 2") {
  const auto p = ToyEncoderParams::identity(8, 2, 0);
  const auto base = toy_base_vectors_f64(tokenize("x y z"), p);
  const auto c = neighbor_means(base, 2);
  for (std::size_t k = 0; k < 8; ++k) {
    CHECK(c(1, k) == doctest::Approx((base(0, k) + base(2, k)) / 2).epsilon(1e-15));
    CHECK(c(0, k) == doctest::Approx((base(1, k) + base(2, k)) / 2).epsilon(1e-15));
  }
}

TEST_CASE("contextualization matches A e + B c computed directly") {
  std::mt19937_64 rng(4);
  auto p = ToyEncoderParams::mixing(6, 1, 2, 1.0);
  p.a = oracle::random_matrix(rng, 6, 6);
  const auto base = oracle::random_matrix(rng, 5, 6);
  const auto v = toy_contextualize(base, p);
  for (std::size_t i = 0; i < 5; ++i) {
    std::vector<double> c(6, 0.0);
    double cnt = 0;
    for (std::size_t j = (i == 0 ? 0 : i - 1); j <= std::min<std::size_t>(4, i + 1); ++j) {
      if (j == i) continue;
      for (std::size_t k = 0; k < 6; ++k) c[k] += base(j, k);
      ++cnt;
    }
    for (double& x : c) x /= cnt;
    for (std::size_t r = 0; r < 6; ++r) {
      double e = 0.0;
      for (std::size_t k = 0; k < 6; ++k) e += p.a(r, k) * base(i, k) + p.b(r, k) * c[k];
      CHECK(v(i, r) == doctest::Approx(e).epsilon(1e-12));
    }
  }
}

TEST_CASE("zero-window linearity") {
  std::mt19937_64 rng(9);
  auto p = ToyEncoderParams::mixing(8, 0, 5, 1.0);
  p.a = oracle::random_matrix(rng, 8, 8);
  const auto x = oracle::random_matrix(rng, 7, 8);
  Matrix<double> scaled = x;
  for (double& v : scaled.data()) v *= -2.5;
  const auto lhs = toy_contextualize(scaled, p);
  auto rhs = toy_contextualize(x, p);
  for (double& v : rhs.data()) v *= -2.5;
  CHECK(max_diff(lhs, rhs) < 1e-12);
}

TEST_CASE("dimension mismatch is rejected") {
  const auto p = ToyEncoderParams::identity(8, 1, 0);
  Matrix<double> base(3, 4);
  CHECK_THROWS_AS(toy_contextualize(base, p), DimensionMismatch);
}

TEST_CASE("toy encoder output is bit-identical across runs and equals the pipeline") {
  const ToyEncoder enc(ToyEncoderParams::mixing(32, 2, 11, 1.0));
  const auto a = enc.encode("A group of men play soccer on the beach.");
  const auto b = enc.encode("A group of men play soccer on the beach.");
  CHECK(a.vectors == b.vectors);
  CHECK(a.tokens.size() == a.vectors.rows());
  const auto direct = toy_contextualize(toy_base_vectors(tokenize("A group of men play soccer on the beach."), enc.params()),
                                        enc.params());
  CHECK(static_cast<const Matrix<float>&>(direct) == static_cast<const Matrix<float>&>(a.vectors));
}

TEST_CASE("params file round trip") {
  testutil::TempDir dir;
  const auto p = ToyEncoderParams::mixing(12, 3, 99, 0.7);
  save_toy_params(p, dir / "p.stoy");
  const auto q = load_toy_params(dir / "p.stoy");
  CHECK(q == p);
  const auto bytes = testutil::read_file(dir / "p.stoy");
  CHECK(bytes.substr(0, 4) == "STOY");
  CHECK(bytes.size() == 4 + 4 + 4 + 4 + 8 + 2 * 12 * 12 * 8);

  testutil::write_file(dir / "bad.stoy", bytes.substr(0, bytes.size() - 3));
  CHECK_THROWS_AS(load_toy_params(dir / "bad.stoy"), FormatError);
  testutil::write_file(dir / "magic.stoy", "XTOY" + bytes.substr(4));
  CHECK_THROWS_AS(load_toy_params(dir / "magic.stoy"), FormatError);
}
