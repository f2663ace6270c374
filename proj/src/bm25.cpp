#include "spanmine/bm25.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <unordered_set>
#include <vector>

#include "spanmine/dataset.hpp"
#include "spanmine/error.hpp"

namespace spanmine {
namespace {

double raw_idf(std::size_t n_docs, std::size_t df) {
  const double n = static_cast<double>(n_docs);
  const double f = static_cast<double>(df);
  return std::log((n - f + 0.5) / (f + 0.5));
}

}  // namespace

CorpusStats::CorpusStats(std::size_t doc_count, double avgdl, std::unordered_map<std::string, std::size_t> df)
    : doc_count_(doc_count), avgdl_(avgdl), df_(std::move(df)) {
  if (doc_count_ == 0) throw DegenerateInput("corpus statistics need at least one document");
  if (!(avgdl_ > 0.0)) throw DegenerateInput("corpus average document length must be positive");
  double sum = 0.0;
  for (const auto& [term, f] : df_) {
    if (f == 0 || f > doc_count_) throw Error("document frequency of '" + term + "' out of range");
    sum += raw_idf(doc_count_, f);
  }
  mean_idf_ = df_.empty() ? 0.0 : sum / static_cast<double>(df_.size());
}

std::size_t CorpusStats::df(const std::string& term) const {
  const auto it = df_.find(term);
  return it == df_.end() ? 0 : it->second;
}

double CorpusStats::idf(const std::string& term, double epsilon) const {
  const double floor = epsilon * mean_idf_;
  return std::max(0.0, std::max(raw_idf(doc_count_, df(term)), floor));
}

CorpusStats build_corpus_stats(std::span<const TokenSequence> documents) {
  if (documents.empty()) throw DegenerateInput("cannot build corpus statistics from an empty corpus");
  std::unordered_map<std::string, std::size_t> df;
  std::size_t total = 0;
  for (const auto& doc : documents) {
    total += doc.size();
    std::unordered_set<std::string> seen;
    for (const auto& t : doc) {
      if (seen.insert(t.text).second) ++df[t.text];
    }
  }
  const double avgdl = static_cast<double>(total) / static_cast<double>(documents.size());
  return CorpusStats(documents.size(), avgdl, std::move(df));
}

double bm25_score(const TokenSequence& query, const TokenSequence& doc, const CorpusStats& stats,
                  const Bm25Params& params) {
  if (query.empty() || doc.empty()) return 0.0;
  std::unordered_map<std::string, std::size_t> tf;
  for (const auto& t : doc) ++tf[t.text];
  const double norm = params.k1 * (1.0 - params.b + params.b * static_cast<double>(doc.size()) / stats.avgdl());
  double score = 0.0;
  for (const auto& q : query) {
    const auto it = tf.find(q.text);
    if (it == tf.end()) continue;
    const double f = static_cast<double>(it->second);
    score += stats.idf(q.text, params.epsilon) * f * (params.k1 + 1.0) / (f + norm);
  }
  return score;
}

void save_corpus_stats(const CorpusStats& stats, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out.precision(17);
  out << "#bm25-stats\tN_docs\t" << stats.doc_count() << "\tavgdl\t" << stats.avgdl() << '\n';
  std::vector<std::pair<std::string, std::size_t>> rows(stats.document_frequencies().begin(),
                                                        stats.document_frequencies().end());
  std::sort(rows.begin(), rows.end());
  for (const auto& [term, f] : rows) out << term << '\t' << f << '\n';
  if (!out) throw Error("write failed: " + path.string());
}

CorpusStats load_corpus_stats(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw FormatError(path.string() + ": empty stats file");
  const auto header = split_tsv(line);
  if (header.size() != 5 || header[0] != "#bm25-stats" || header[1] != "N_docs" || header[3] != "avgdl") {
    throw FormatError(path.string() + ": bad stats header");
  }
  std::size_t n_docs = 0;
  double avgdl = 0.0;
  try {
    n_docs = std::stoull(header[2]);
    avgdl = std::stod(header[4]);
  } catch (const std::exception&) {
    throw FormatError(path.string() + ": bad stats header values");
  }
  std::unordered_map<std::string, std::size_t> df;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto f = split_tsv(line);
    std::size_t value = 0;
    if (f.size() != 2 || std::from_chars(f[1].data(), f[1].data() + f[1].size(), value).ec != std::errc()) {
      throw FormatError(path.string() + ":" + std::to_string(line_no) + ": expected term<TAB>df");
    }
    df.emplace(f[0], value);
  }
  return CorpusStats(n_docs, avgdl, std::move(df));
}

}  // namespace spanmine
