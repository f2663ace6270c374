#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "spanmine/dataset.hpp"
#include "spanmine/encoder.hpp"
#include "spanmine/span_index.hpp"
#include "spanmine/stats.hpp"

namespace spanmine {

enum class Setup { full_context, per_ngram, single_pass };

/// "full_context", "per_ngram", "single_pass".
std::string_view to_string(Setup s);
/// Accepts the canonical names and the CLI spellings "full", "per-ngram", "single-pass".
Setup parse_setup(std::string_view s);
std::vector<Setup> all_setups();

struct RecordPrediction {
  std::string id;
  double gold = 0.0;
  double prediction = 0.0;
  std::size_t char_start = 0;  // best span in the context (whole context for full_context)
  std::size_t char_end = 0;

  friend bool operator==(const RecordPrediction&, const RecordPrediction&) = default;
};

struct SetupResult {
  Setup setup = Setup::single_pass;
  CorrelationReport correlation;
  std::vector<RecordPrediction> predictions;
};

struct EvalOptions {
  SpanConfig spans = SpanConfig::evaluation();
  Representation representation = Representation::mean_pool;
  std::size_t threads = 0;  // 0 = worker_threads()
};

/// Per-record predictions for one setup:
///   full_context  cosine of mean-pooled context vs mean-pooled origin phrase
///   per_ngram     max over spans, each span's text encoded on its own
///   single_pass   max over spans pooled from one encoding of the context
/// followed by Pearson and Spearman against gold. Encoder failures are rethrown as Error
/// naming the record id.
std::vector<RecordPrediction> predict_setup(std::span<const EvalRecord> records, const Encoder& encoder, Setup setup,
                                            const EvalOptions& options = {});
SetupResult eval_setup(std::span<const EvalRecord> records, const Encoder& encoder, Setup setup,
                       const EvalOptions& options = {});

struct WilliamsComparison {
  Setup a = Setup::full_context;
  Setup b = Setup::single_pass;
  double r12 = 0.0;  // gold vs a
  double r13 = 0.0;  // gold vs b
  double r23 = 0.0;  // a vs b
  double t = 0.0;
  double p = 1.0;
  bool significant = false;  // p < 0.05
};

struct EvalReport {
  std::vector<std::pair<std::string, std::string>> config;
  std::vector<SetupResult> setups;
  std::vector<WilliamsComparison> comparisons;
};

WilliamsComparison compare_setups(const SetupResult& a, const SetupResult& b);

/// Assembles a report from at least two setups evaluated on the same records (same ids in the
/// same order with the same gold), with one Williams comparison per setup pair.
EvalReport build_report(std::vector<SetupResult> setups, std::vector<std::pair<std::string, std::string>> config);

/// Summary at `path`:
///   config<TAB>key<TAB>value
///   setup<TAB>name<TAB>pearson<TAB>spearman<TAB>n
///   williams<TAB>a<TAB>b<TAB>r12<TAB>r13<TAB>r23<TAB>t<TAB>p<TAB>significant
/// and per-record predictions at predictions_path(path):
///   id<TAB>setup<TAB>gold<TAB>prediction<TAB>char_start<TAB>char_end
void write_report(const std::filesystem::path& path, const EvalReport& report);
EvalReport read_report(const std::filesystem::path& path);
std::filesystem::path predictions_path(const std::filesystem::path& report_path);

}  // namespace spanmine
