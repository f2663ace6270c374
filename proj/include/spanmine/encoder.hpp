#pragma once

#include <atomic>
#include <cstddef>
#include <filesystem>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "spanmine/matrix.hpp"
#include "spanmine/text.hpp"
#include "spanmine/toy_encoder.hpp"

namespace spanmine {

/// Output of an encoder: tokens and one vector per token.
struct Encoded {
  TokenSequence tokens;
  EmbeddingMatrix vectors;
  std::vector<std::size_t> unknown_tokens;  // static vectors only: rows mapped to zero
};

/// Encoder abstraction. Implementations are immutable after construction and may be shared
/// across threads.
class Encoder {
 public:
  virtual ~Encoder() = default;

  virtual Encoded encode(std::string_view text) const = 0;

  /// Order-preserving batch encode. The default calls encode() per text.
  virtual std::vector<Encoded> encode_batch(std::span<const std::string> texts) const;

  virtual std::size_t dim() const = 0;

  /// Short description, e.g. "toy(d=64,w=2,seed=0)".
  virtual std::string id() const = 0;
};

class ToyEncoder final : public Encoder {
 public:
  explicit ToyEncoder(ToyEncoderParams params);

  Encoded encode(std::string_view text) const override;
  std::size_t dim() const override { return params_.dim; }
  std::string id() const override;
  const ToyEncoderParams& params() const noexcept { return params_; }

 private:
  ToyEncoderParams params_;
};

/// word2vec-style text vectors: "token f1 f2 ... fd" per line. An optional leading
/// "<count> <dim>" header line is accepted.
class StaticVectors {
 public:
  StaticVectors(std::size_t dim, std::unordered_map<std::string, std::vector<float>> table);

  static StaticVectors load(const std::filesystem::path& path);

  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return table_.size(); }
  const std::vector<float>* find(const std::string& token) const;

 private:
  std::size_t dim_;
  std::unordered_map<std::string, std::vector<float>> table_;
};

/// Looks tokens up in a static table. Unknown tokens become zero rows and are listed in
/// Encoded::unknown_tokens.
class StaticVectorEncoder final : public Encoder {
 public:
  explicit StaticVectorEncoder(std::shared_ptr<const StaticVectors> vectors, std::string source = {});

  Encoded encode(std::string_view text) const override;
  std::size_t dim() const override { return vectors_->dim(); }
  std::string id() const override;

 private:
  std::shared_ptr<const StaticVectors> vectors_;
  std::string source_;
};

// External encoder line protocol. Requests: {"id": ..., "text": ...}. Responses:
// {"id": ..., "tokens": [{"text","start","end"}...], "vectors": [[...]...]}, one per request,
// in request order.
std::string format_request_line(std::string_view id, std::string_view text);
Encoded parse_response_line(std::string_view line, std::string_view expected_id);
std::string format_response_line(std::string_view id, const TokenSequence& tokens, const Matrix<float>& vectors);

/// Moves request lines to the encoder and returns its response lines.
using LineTransport = std::function<std::vector<std::string>(const std::vector<std::string>& requests)>;

/// Runs `command` through the shell with the request lines on stdin and reads response lines
/// from stdout (via a temporary file pair).
LineTransport subprocess_transport(std::string command);

class ExternalEncoder final : public Encoder {
 public:
  /// `dim` = 0 accepts whatever dimension the first response carries and then requires it to
  /// stay constant.
  ExternalEncoder(LineTransport transport, std::string description, std::size_t dim = 0);

  Encoded encode(std::string_view text) const override;
  std::vector<Encoded> encode_batch(std::span<const std::string> texts) const override;
  std::size_t dim() const override;
  std::string id() const override { return "extern(" + description_ + ")"; }

 private:
  LineTransport transport_;
  std::string description_;
  mutable std::atomic<std::size_t> dim_;
};

/// Builds an encoder from a spec string:
///   "toy"               mixing toy encoder (d=64, w=2) with the given seed
///   "toy:<params-file>" toy encoder loaded from a STOY file
///   "static:<path>"     static word vectors
///   "extern:<command>"  external encoder over the line protocol
struct ToyOptions {
  std::size_t dim = 64;
  std::size_t window = 2;
  double mix = 1.0;
};
std::unique_ptr<Encoder> make_encoder(std::string_view spec, std::uint64_t seed = 0, const ToyOptions& toy = {});

}  // namespace spanmine
