#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace spanmine {

/// One evaluation pair: an origin phrase and a context that contains a paraphrase of it,
/// with a gold similarity in [0, 5].
struct EvalRecord {
  std::string id;
  double gold_score = 0.0;
  std::string origin_phrase;
  std::string context;

  friend bool operator==(const EvalRecord&, const EvalRecord&) = default;
};

/// Training triple: query phrase, a passage containing a similar span, a passage without one.
struct Triple {
  std::string query;
  std::string positive;
  std::string negative;

  friend bool operator==(const Triple&, const Triple&) = default;
};

/// Zero-based column positions in the evaluation TSV. `id` is optional; without it records
/// are numbered by line.
struct ColumnMap {
  std::size_t score = 0;
  std::size_t origin_phrase = 1;
  std::size_t context = 2;
  std::optional<std::size_t> id;

  /// Resolves column names against a header line ("score", "origin_phrase", "context", "id"
  /// by default, or the names given).
  static ColumnMap from_header(std::string_view header_line, std::string_view score_name = "score",
                               std::string_view origin_name = "origin_phrase",
                               std::string_view context_name = "context", std::string_view id_name = "id");
};

struct LoadOptions {
  ColumnMap columns;
  bool has_header = false;  // skip the first line
  bool lenient = false;     // skip malformed rows instead of failing
};

struct LoadDiagnostic {
  std::size_t line = 0;
  std::string message;
};

struct EvalLoadResult {
  std::vector<EvalRecord> records;
  std::vector<LoadDiagnostic> skipped;
};

/// Splits one line on tabs (a trailing '\r' is dropped).
std::vector<std::string> split_tsv(std::string_view line);

/// Loads a UTF-8 TSV of evaluation records. Malformed rows (missing columns, unparsable or
/// out-of-range scores, empty texts) throw FormatError with the line number unless lenient.
EvalLoadResult load_stsb_context(const std::filesystem::path& path, const LoadOptions& options = {});

/// Loads "query\tpositive\tnegative" lines. Lines with a different field count throw
/// FormatError naming the line. Blank lines are ignored.
std::vector<Triple> load_msmarco_triples(const std::filesystem::path& path);

/// Writers for the same formats (records as score, origin, context, id).
void write_eval_records(const std::filesystem::path& path, std::span<const EvalRecord> records);
void write_triples(const std::filesystem::path& path, std::span<const Triple> triples);

}  // namespace spanmine
