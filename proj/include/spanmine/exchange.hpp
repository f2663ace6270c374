#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "spanmine/matrix.hpp"
#include "spanmine/text.hpp"

namespace spanmine {

struct ExchangeDoc {
  std::string doc_id;
  TokenSequence tokens;
  EmbeddingMatrix vectors;

  friend bool operator==(const ExchangeDoc&, const ExchangeDoc&) = default;
};

/// Embedding exchange file, all integers little-endian:
///   "SAEM" | u32 version (1) | u64 doc count
///   per doc: u32-length-prefixed UTF-8 doc id | u32 token count | u32 dim |
///            token table (u32-length-prefixed text, u32 char_start, u32 char_end) |
///            token count x dim float32, row-major
void write_exchange(const std::filesystem::path& path, std::span<const ExchangeDoc> docs);
std::vector<ExchangeDoc> read_exchange(const std::filesystem::path& path);

}  // namespace spanmine
