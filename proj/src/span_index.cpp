#include "spanmine/span_index.hpp"

#include <cmath>

#include "doc_record.hpp"
#include "spanmine/error.hpp"

namespace spanmine {

std::string_view to_string(Representation r) {
  return r == Representation::mean_pool ? "mean" : "endpoint";
}

std::string_view to_string(StorageMode m) { return m == StorageMode::lazy ? "lazy" : "materialized"; }

Representation parse_representation(std::string_view s) {
  if (s == "mean") return Representation::mean_pool;
  if (s == "endpoint") return Representation::endpoint_concat;
  throw Error("unknown representation '" + std::string(s) + "' (expected mean or endpoint)");
}

StorageMode parse_storage_mode(std::string_view s) {
  if (s == "lazy") return StorageMode::lazy;
  if (s == "materialized") return StorageMode::materialized;
  throw Error("unknown storage mode '" + std::string(s) + "' (expected lazy or materialized)");
}

SpanIndex SpanIndex::build(std::string doc_id, TokenSequence tokens, EmbeddingMatrix vectors,
                           const SpanIndexOptions& options, std::string text) {
  options.spans.validate();
  if (tokens.size() != vectors.rows()) {
    throw DimensionMismatch("document '" + doc_id + "': " + std::to_string(tokens.size()) + " tokens but " +
                            std::to_string(vectors.rows()) + " embedding rows");
  }
  if (!vectors.all_finite()) throw Error("document '" + doc_id + "': non-finite embedding entries");

  SpanIndex idx;
  idx.doc_id_ = std::move(doc_id);
  idx.text_ = std::move(text);
  idx.tokens_ = std::move(tokens);
  idx.vectors_ = std::move(vectors);
  idx.vectors_.set_doc_id(idx.doc_id_);
  idx.options_ = options;

  const std::size_t n = idx.tokens_.size();
  const SpanConfig& cfg = options.spans;
  idx.span_count_ = spanmine::span_count(n, cfg);
  idx.start_offsets_.resize(n + 1);
  std::size_t acc = 0;
  for (std::size_t s = 0; s < n; ++s) {
    idx.start_offsets_[s] = acc;
    const std::size_t max_len = std::min(cfg.max_size, n - s);
    if (max_len >= cfg.min_size) acc += max_len - cfg.min_size + 1;
  }
  idx.start_offsets_[n] = acc;

  const bool mean = options.representation == Representation::mean_pool;
  PrefixMatrix prefix;
  if (mean) prefix = build_prefix(idx.vectors_);

  const std::size_t dim = idx.dim();
  if (options.mode == StorageMode::materialized || options.store_norms) {
    Matrix<float> mat;
    if (options.mode == StorageMode::materialized) mat = Matrix<float>(idx.span_count_, dim);
    if (options.store_norms) idx.norms_.resize(idx.span_count_);
    std::vector<double> buf(dim);
    std::size_t j = 0;
    for_each_span(n, cfg, [&](SpanRef s) {
      if (mean) {
        mean_pool_into(s, prefix, buf);
      } else {
        endpoint_concat_into(s, idx.vectors_, buf);
      }
      if (options.mode == StorageMode::materialized) {
        auto row = mat.row(j);
        for (std::size_t k = 0; k < dim; ++k) row[k] = static_cast<float>(buf[k]);
      }
      if (options.store_norms) {
        double n2 = 0.0;
        for (double x : buf) n2 += x * x;
        idx.norms_[j] = std::sqrt(n2);
      }
      ++j;
    });
    idx.materialized_ = std::move(mat);
  }
  if (options.mode == StorageMode::lazy && mean) idx.prefix_ = std::move(prefix);
  return idx;
}

std::size_t SpanIndex::dim() const noexcept {
  return options_.representation == Representation::mean_pool ? vectors_.dim() : 2 * vectors_.dim();
}

std::size_t SpanIndex::ordinal(SpanRef span) const {
  const std::size_t n = tokens_.size();
  const auto& cfg = options_.spans;
  if (span.end > n || span.end <= span.start || span.length() < cfg.min_size || span.length() > cfg.max_size) {
    throw Error("span [" + std::to_string(span.start) + ", " + std::to_string(span.end) + ") is not indexed");
  }
  return start_offsets_[span.start] + (span.length() - cfg.min_size);
}

void SpanIndex::span_vector(SpanRef span, std::span<double> out) const {
  if (out.size() != dim()) throw DimensionMismatch("span vector output has wrong dimension");
  if (options_.mode == StorageMode::materialized) {
    const auto row = materialized_.row(ordinal(span));
    for (std::size_t k = 0; k < row.size(); ++k) out[k] = row[k];
    return;
  }
  ordinal(span);  // bounds check
  if (options_.representation == Representation::mean_pool) {
    mean_pool_into(span, prefix_, out);
  } else {
    endpoint_concat_into(span, vectors_, out);
  }
}

std::vector<double> SpanIndex::span_vector(SpanRef span) const {
  std::vector<double> out(dim());
  span_vector(span, out);
  return out;
}

std::size_t SpanIndex::lookup_bytes() const noexcept {
  return prefix_.sums().data().size_bytes() + materialized_.data().size_bytes() + norms_.size() * sizeof(double) +
         start_offsets_.size() * sizeof(std::size_t);
}

std::pair<std::size_t, std::size_t> SpanIndex::char_range(SpanRef span) const {
  if (span.end > tokens_.size() || span.end <= span.start) throw Error("span out of range");
  return {tokens_[span.start].char_start, tokens_[span.end - 1].char_end};
}

std::string SpanIndex::span_text(SpanRef span) const {
  const auto [lo, hi] = char_range(span);
  if (!text_.empty() && hi <= text_.size()) return text_.substr(lo, hi - lo);
  std::string out;
  for (std::size_t i = span.start; i < span.end; ++i) {
    if (i > span.start) out += ' ';
    out += tokens_[i].text;
  }
  return out;
}

void save_span_indexes(const std::filesystem::path& path, std::span<const SpanIndex> indexes,
                       std::string_view encoder_id) {
  detail::BinaryWriter w(path);
  w.magic("SAIX");
  w.u32(1);
  w.u64(indexes.size());
  w.string(encoder_id);
  for (const auto& idx : indexes) {
    detail::write_doc_record(w, idx.doc_id(), idx.tokens(), idx.embeddings());
    w.string(idx.text());
    const auto& o = idx.options();
    w.u32(detail::checked_u32(o.spans.min_size, "min span"));
    w.u32(detail::checked_u32(o.spans.max_size, "max span"));
    w.u8(static_cast<std::uint8_t>(o.representation));
    w.u8(static_cast<std::uint8_t>(o.mode));
    w.u8(o.store_norms ? 1 : 0);
  }
  w.finish();
}

LoadedIndexes load_span_indexes(const std::filesystem::path& path) {
  detail::BinaryReader r(path);
  r.expect_magic("SAIX");
  const std::uint32_t version = r.u32();
  if (version != 1) throw FormatError(path.string() + ": unsupported SAIX version " + std::to_string(version));
  const std::uint64_t count = r.u64();
  LoadedIndexes out;
  out.encoder_id = r.string();
  for (std::uint64_t i = 0; i < count; ++i) {
    ExchangeDoc doc = detail::read_doc_record(r);
    std::string text = r.string();
    SpanIndexOptions o;
    o.spans.min_size = r.u32();
    o.spans.max_size = r.u32();
    const std::uint8_t rep = r.u8();
    const std::uint8_t mode = r.u8();
    const std::uint8_t norms = r.u8();
    if (rep > 1 || mode > 1 || norms > 1) throw FormatError(path.string() + ": bad span metadata");
    o.representation = static_cast<Representation>(rep);
    o.mode = static_cast<StorageMode>(mode);
    o.store_norms = norms == 1;
    out.indexes.push_back(
        SpanIndex::build(std::move(doc.doc_id), std::move(doc.tokens), std::move(doc.vectors), o, std::move(text)));
  }
  if (!r.at_end()) throw FormatError(path.string() + ": trailing bytes after last index");
  return out;
}

}  // namespace spanmine
