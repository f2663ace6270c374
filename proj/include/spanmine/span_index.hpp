#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "spanmine/matrix.hpp"
#include "spanmine/span.hpp"
#include "spanmine/text.hpp"

namespace spanmine {

enum class Representation : std::uint8_t { mean_pool = 0, endpoint_concat = 1 };
enum class StorageMode : std::uint8_t { materialized = 0, lazy = 1 };

std::string_view to_string(Representation r);
std::string_view to_string(StorageMode m);
/// Accepts "mean" / "endpoint".
Representation parse_representation(std::string_view s);
/// Accepts "lazy" / "materialized".
StorageMode parse_storage_mode(std::string_view s);

struct SpanIndexOptions {
  SpanConfig spans = SpanConfig::evaluation();
  Representation representation = Representation::mean_pool;
  StorageMode mode = StorageMode::lazy;
  bool store_norms = false;  // one float64 norm per span
};

/// Every admissible span of one document, ready for similarity scans.
///
/// Lazy mode keeps only Theta(N) state (prefix sums for mean pooling, the token rows for
/// endpoint concatenation) and derives span vectors on demand. Materialized mode stores all
/// Theta(NK) span vectors as float32 in enumeration order.
class SpanIndex {
 public:
  static SpanIndex build(std::string doc_id, TokenSequence tokens, EmbeddingMatrix vectors,
                         const SpanIndexOptions& options, std::string text = {});

  const std::string& doc_id() const noexcept { return doc_id_; }
  const std::string& text() const noexcept { return text_; }
  const TokenSequence& tokens() const noexcept { return tokens_; }
  const EmbeddingMatrix& embeddings() const noexcept { return vectors_; }
  const SpanIndexOptions& options() const noexcept { return options_; }

  std::size_t token_count() const noexcept { return tokens_.size(); }
  std::size_t span_count() const noexcept { return span_count_; }
  /// Dimension of a span vector: d for mean pooling, 2d for endpoint concatenation.
  std::size_t dim() const noexcept;

  /// Position of `span` in enumeration order.
  std::size_t ordinal(SpanRef span) const;

  void span_vector(SpanRef span, std::span<double> out) const;
  std::vector<double> span_vector(SpanRef span) const;

  /// Materialized span vectors (span_count x dim), empty in lazy mode.
  const Matrix<float>& materialized() const noexcept { return materialized_; }
  /// Prefix sums; populated for lazy mean pooling only.
  const PrefixMatrix& prefix() const noexcept { return prefix_; }
  /// Per-span norms in enumeration order; empty unless store_norms.
  std::span<const double> norms() const noexcept { return norms_; }

  /// Bytes held for span lookup beyond the token rows themselves.
  std::size_t lookup_bytes() const noexcept;

  /// UTF-8 byte range of the span in the original text.
  std::pair<std::size_t, std::size_t> char_range(SpanRef span) const;
  /// Span text from the stored document text, or joined token texts when no text is stored.
  std::string span_text(SpanRef span) const;

 private:
  std::string doc_id_;
  std::string text_;
  TokenSequence tokens_;
  EmbeddingMatrix vectors_;
  SpanIndexOptions options_;
  std::size_t span_count_ = 0;
  std::vector<std::size_t> start_offsets_;  // ordinal of the first span starting at each token
  PrefixMatrix prefix_;
  Matrix<float> materialized_;
  std::vector<double> norms_;
};

/// Index file: "SAIX", u32 version, u64 doc count, encoder id string, then per document the
/// exchange-file document record (doc id, token table, float32 rows) followed by the document
/// text and span metadata (u32 min, u32 max, u8 representation, u8 mode, u8 store_norms).
/// Derived state (prefix sums, materialized vectors) is rebuilt on load.
void save_span_indexes(const std::filesystem::path& path, std::span<const SpanIndex> indexes,
                       std::string_view encoder_id);

struct LoadedIndexes {
  std::string encoder_id;
  std::vector<SpanIndex> indexes;
};
LoadedIndexes load_span_indexes(const std::filesystem::path& path);

}  // namespace spanmine
