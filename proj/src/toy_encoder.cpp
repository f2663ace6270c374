#include "spanmine/toy_encoder.hpp"

#include <cmath>
#include <numbers>

#include "binary_io.hpp"
#include "spanmine/error.hpp"

namespace spanmine {

ToyEncoderParams ToyEncoderParams::identity(std::size_t dim, std::size_t window, std::uint64_t seed) {
  ToyEncoderParams p;
  p.dim = dim;
  p.window = window;
  p.seed = seed;
  p.a = Matrix<double>::identity(dim);
  p.b = Matrix<double>(dim, dim);
  return p;
}

ToyEncoderParams ToyEncoderParams::mixing(std::size_t dim, std::size_t window, std::uint64_t seed, double mix) {
  ToyEncoderParams p = identity(dim, window, seed);
  // Offset so the mixing matrix stream never coincides with a token's base-vector stream.
  GaussianStream g(splitmix64(seed ^ 0x6d6978696e67ULL));
  const double scale = mix / std::sqrt(static_cast<double>(dim));
  for (double& x : p.b.data()) x = scale * g.next();
  return p;
}

void ToyEncoderParams::validate() const {
  if (dim == 0) throw Error("toy encoder dimension must be positive");
  if (a.rows() != dim || a.cols() != dim || b.rows() != dim || b.cols() != dim) {
    throw DimensionMismatch("toy encoder matrices must be " + std::to_string(dim) + "x" + std::to_string(dim));
  }
  if (!a.all_finite() || !b.all_finite()) throw Error("toy encoder matrices contain non-finite values");
}

double GaussianStream::next() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  constexpr double k2pow53 = 1.0 / 9007199254740992.0;
  // Both uniforms lie strictly inside (0, 1).
  const double u1 = (static_cast<double>(engine_() >> 11) + 0.5) * k2pow53;
  const double u2 = (static_cast<double>(engine_() >> 11) + 0.5) * k2pow53;
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(theta);
  has_spare_ = true;
  return r * std::cos(theta);
}

void toy_base_vector(std::string_view text, std::uint64_t seed, std::span<double> out) {
  GaussianStream g(token_seed(text, seed));
  double norm2 = 0.0;
  for (double& x : out) {
    x = g.next();
    norm2 += x * x;
  }
  const double inv = 1.0 / std::sqrt(norm2);
  for (double& x : out) x *= inv;
}

Matrix<double> toy_base_vectors_f64(const TokenSequence& tokens, const ToyEncoderParams& params) {
  Matrix<double> m(tokens.size(), params.dim);
  for (std::size_t i = 0; i < tokens.size(); ++i) toy_base_vector(tokens[i].text, params.seed, m.row(i));
  return m;
}

EmbeddingMatrix toy_base_vectors(const TokenSequence& tokens, const ToyEncoderParams& params) {
  return to_embedding(toy_base_vectors_f64(tokens, params));
}

Matrix<double> neighbor_means(const Matrix<double>& base, std::size_t window) {
  const std::size_t n = base.rows();
  const std::size_t d = base.cols();
  Matrix<double> c(n, d);
  if (window == 0) return c;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t lo = i >= window ? i - window : 0;
    const std::size_t hi = std::min(n - 1, i + window);
    std::size_t count = 0;
    auto out = c.row(i);
    for (std::size_t j = lo; j <= hi; ++j) {
      if (j == i) continue;
      const auto r = base.row(j);
      for (std::size_t k = 0; k < d; ++k) out[k] += r[k];
      ++count;
    }
    if (count > 0) {
      const double inv = 1.0 / static_cast<double>(count);
      for (double& x : out) x *= inv;
    }
  }
  return c;
}

Matrix<double> toy_contextualize(const Matrix<double>& base, const ToyEncoderParams& params) {
  if (base.cols() != params.dim) {
    throw DimensionMismatch("base dimension " + std::to_string(base.cols()) + " != encoder dimension " +
                            std::to_string(params.dim));
  }
  const std::size_t n = base.rows();
  const std::size_t d = params.dim;
  const Matrix<double> ctx = neighbor_means(base, params.window);
  Matrix<double> out(n, d);
  for (std::size_t i = 0; i < n; ++i) {
    const auto e = base.row(i);
    const auto c = ctx.row(i);
    auto v = out.row(i);
    for (std::size_t r = 0; r < d; ++r) {
      const auto arow = params.a.row(r);
      const auto brow = params.b.row(r);
      double acc = 0.0;
      for (std::size_t k = 0; k < d; ++k) acc += arow[k] * e[k] + brow[k] * c[k];
      v[r] = acc;
    }
  }
  return out;
}

EmbeddingMatrix toy_contextualize(const EmbeddingMatrix& base, const ToyEncoderParams& params) {
  return to_embedding(toy_contextualize(to_f64(base), params), base.doc_id());
}

void save_toy_params(const ToyEncoderParams& params, const std::filesystem::path& path) {
  params.validate();
  detail::BinaryWriter w(path);
  w.magic("STOY");
  w.u32(1);
  w.u32(detail::checked_u32(params.dim, "dim"));
  w.u32(detail::checked_u32(params.window, "window"));
  w.u64(params.seed);
  w.f64s(params.a.data());
  w.f64s(params.b.data());
  w.finish();
}

ToyEncoderParams load_toy_params(const std::filesystem::path& path) {
  detail::BinaryReader r(path);
  r.expect_magic("STOY");
  const std::uint32_t version = r.u32();
  if (version != 1) throw FormatError(path.string() + ": unsupported STOY version " + std::to_string(version));
  ToyEncoderParams p;
  p.dim = r.u32();
  p.window = r.u32();
  p.seed = r.u64();
  if (p.dim == 0 || p.dim > 65536) throw FormatError(path.string() + ": implausible dimension");
  p.a = Matrix<double>(p.dim, p.dim);
  p.b = Matrix<double>(p.dim, p.dim);
  r.f64s(p.a.data());
  r.f64s(p.b.data());
  p.validate();
  return p;
}

}  // namespace spanmine
