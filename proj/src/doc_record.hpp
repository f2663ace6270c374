#pragma once

#include "binary_io.hpp"
#include "spanmine/exchange.hpp"

namespace spanmine::detail {

void write_doc_record(BinaryWriter& w, const std::string& doc_id, const TokenSequence& tokens,
                      const EmbeddingMatrix& vectors);
ExchangeDoc read_doc_record(BinaryReader& r);

}  // namespace spanmine::detail
