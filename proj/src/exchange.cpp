#include "spanmine/exchange.hpp"

#include "doc_record.hpp"
#include "spanmine/error.hpp"

namespace spanmine {
namespace detail {

void write_doc_record(BinaryWriter& w, const std::string& doc_id, const TokenSequence& tokens,
                      const EmbeddingMatrix& vectors) {
  if (tokens.size() != vectors.rows()) {
    throw DimensionMismatch("document '" + doc_id + "': " + std::to_string(tokens.size()) + " tokens but " +
                            std::to_string(vectors.rows()) + " rows");
  }
  w.string(doc_id);
  w.u32(checked_u32(tokens.size(), "token count"));
  w.u32(checked_u32(vectors.dim(), "dimension"));
  for (const auto& t : tokens) {
    w.string(t.text);
    w.u32(checked_u32(t.char_start, "char_start"));
    w.u32(checked_u32(t.char_end, "char_end"));
  }
  w.f32s(vectors.data());
}

ExchangeDoc read_doc_record(BinaryReader& r) {
  ExchangeDoc doc;
  doc.doc_id = r.string();
  const std::uint32_t n = r.u32();
  const std::uint32_t d = r.u32();
  std::vector<Token> tokens;
  tokens.reserve(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    Token t;
    t.text = r.string();
    t.char_start = r.u32();
    t.char_end = r.u32();
    tokens.push_back(std::move(t));
  }
  try {
    doc.tokens = TokenSequence(std::move(tokens));
  } catch (const Error& e) {
    throw FormatError("document '" + doc.doc_id + "': " + e.what());
  }
  doc.vectors = EmbeddingMatrix(n, d, doc.doc_id);
  r.f32s(doc.vectors.data());
  if (!doc.vectors.all_finite()) throw FormatError("document '" + doc.doc_id + "': non-finite embedding entries");
  return doc;
}

}  // namespace detail

void write_exchange(const std::filesystem::path& path, std::span<const ExchangeDoc> docs) {
  detail::BinaryWriter w(path);
  w.magic("SAEM");
  w.u32(1);
  w.u64(docs.size());
  std::size_t dim = 0;
  for (const auto& doc : docs) {
    if (doc.vectors.rows() > 0) {
      if (dim == 0) dim = doc.vectors.dim();
      if (doc.vectors.dim() != dim) throw DimensionMismatch("exchange documents must share one dimension");
    }
    detail::write_doc_record(w, doc.doc_id, doc.tokens, doc.vectors);
  }
  w.finish();
}

std::vector<ExchangeDoc> read_exchange(const std::filesystem::path& path) {
  detail::BinaryReader r(path);
  r.expect_magic("SAEM");
  const std::uint32_t version = r.u32();
  if (version != 1) throw FormatError(path.string() + ": unsupported SAEM version " + std::to_string(version));
  const std::uint64_t count = r.u64();
  std::vector<ExchangeDoc> docs;
  for (std::uint64_t i = 0; i < count; ++i) docs.push_back(detail::read_doc_record(r));
  if (!r.at_end()) throw FormatError(path.string() + ": trailing bytes after last document");
  return docs;
}

}  // namespace spanmine
