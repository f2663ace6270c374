#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <random>

#include "spanmine/matrix.hpp"
#include "spanmine/text.hpp"

namespace spanmine {

/// Deterministic contextual encoder used at desk scale:
///   v_i = A e_i + B c_i
/// where e_i is a unit base vector derived from the token text and c_i is the mean of the
/// base vectors within `window` positions of i (excluding i), or zero when i has no neighbors.
struct ToyEncoderParams {
  std::size_t dim = 64;
  std::size_t window = 2;
  Matrix<double> a;  // dim x dim
  Matrix<double> b;  // dim x dim
  std::uint64_t seed = 0;

  /// A = I, B = 0. Output equals the base vectors.
  static ToyEncoderParams identity(std::size_t dim = 64, std::size_t window = 2, std::uint64_t seed = 0);

  /// A = I, B = mix * G / sqrt(dim) with G standard normal drawn from `seed`.
  static ToyEncoderParams mixing(std::size_t dim = 64, std::size_t window = 2, std::uint64_t seed = 0,
                                 double mix = 1.0);

  void validate() const;

  friend bool operator==(const ToyEncoderParams&, const ToyEncoderParams&) = default;
};

/// Standard normal draws via Box-Muller over a mt19937_64 stream, so the sequence is fixed
/// by the seed alone (std::normal_distribution is implementation-defined).
class GaussianStream {
 public:
  explicit GaussianStream(std::uint64_t seed) : engine_(seed) {}
  double next();

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// Unit-norm base vector for one token text.
void toy_base_vector(std::string_view text, std::uint64_t seed, std::span<double> out);

Matrix<double> toy_base_vectors_f64(const TokenSequence& tokens, const ToyEncoderParams& params);
EmbeddingMatrix toy_base_vectors(const TokenSequence& tokens, const ToyEncoderParams& params);

/// c_i for every row: mean of rows within `window` of i, excluding i itself.
Matrix<double> neighbor_means(const Matrix<double>& base, std::size_t window);

Matrix<double> toy_contextualize(const Matrix<double>& base, const ToyEncoderParams& params);
EmbeddingMatrix toy_contextualize(const EmbeddingMatrix& base, const ToyEncoderParams& params);

/// Params file: "STOY", u32 version, u32 dim, u32 window, u64 seed, then A and B row-major
/// as float64, all little-endian.
void save_toy_params(const ToyEncoderParams& params, const std::filesystem::path& path);
ToyEncoderParams load_toy_params(const std::filesystem::path& path);

}  // namespace spanmine
