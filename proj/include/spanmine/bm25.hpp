#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <unordered_map>

#include "spanmine/text.hpp"

namespace spanmine {

struct Bm25Params {
  double k1 = 1.5;
  double b = 0.75;
  double epsilon = 0.25;
};

/// Document frequencies and length statistics of a reference corpus.
class CorpusStats {
 public:
  CorpusStats(std::size_t doc_count, double avgdl, std::unordered_map<std::string, std::size_t> df);

  std::size_t doc_count() const noexcept { return doc_count_; }
  double avgdl() const noexcept { return avgdl_; }
  std::size_t df(const std::string& term) const;
  const std::unordered_map<std::string, std::size_t>& document_frequencies() const noexcept { return df_; }

  /// ln((N - df + 0.5) / (df + 0.5)) averaged over the corpus vocabulary.
  double mean_idf() const noexcept { return mean_idf_; }

  /// IDF with the floor: values below epsilon * mean_idf are raised to it, and the result is
  /// never negative. Unknown terms use df = 0.
  double idf(const std::string& term, double epsilon = Bm25Params{}.epsilon) const;

 private:
  std::size_t doc_count_;
  double avgdl_;
  std::unordered_map<std::string, std::size_t> df_;
  double mean_idf_ = 0.0;
};

/// Throws on an empty corpus.
CorpusStats build_corpus_stats(std::span<const TokenSequence> documents);

/// Okapi BM25: sum over query tokens (repeats count) of
///   idf(t) * tf * (k1 + 1) / (tf + k1 * (1 - b + b * |doc| / avgdl)).
double bm25_score(const TokenSequence& query, const TokenSequence& doc, const CorpusStats& stats,
                  const Bm25Params& params = {});

/// Stats cache: header "#bm25-stats\tN_docs\t<N>\tavgdl\t<avgdl>" then "term\tdf" lines
/// sorted by term.
void save_corpus_stats(const CorpusStats& stats, const std::filesystem::path& path);
CorpusStats load_corpus_stats(const std::filesystem::path& path);

}  // namespace spanmine
