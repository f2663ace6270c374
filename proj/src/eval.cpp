#include "spanmine/eval.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <optional>

#include "spanmine/error.hpp"
#include "spanmine/similarity.hpp"
#include "spanmine/threads.hpp"

namespace spanmine {
namespace {

std::vector<double> represent_whole(const Matrix<float>& rows, Representation r) {
  if (rows.rows() == 0) return {};
  return represent_query(rows, r);
}

RecordPrediction predict_full(const EvalRecord& rec, const Encoder& encoder) {
  const Encoded phrase = encoder.encode(rec.origin_phrase);
  const Encoded ctx = encoder.encode(rec.context);
  RecordPrediction out{rec.id, rec.gold_score, 0.0, 0, 0};
  if (phrase.tokens.empty() || ctx.tokens.empty()) return out;
  out.prediction = normalized_cosine(mean_rows(phrase.vectors), mean_rows(ctx.vectors));
  out.char_start = ctx.tokens[0].char_start;
  out.char_end = ctx.tokens[ctx.tokens.size() - 1].char_end;
  return out;
}

RecordPrediction predict_single(const EvalRecord& rec, const Encoder& encoder, const EvalOptions& opt) {
  const Encoded phrase = encoder.encode(rec.origin_phrase);
  Encoded ctx = encoder.encode(rec.context);
  RecordPrediction out{rec.id, rec.gold_score, 0.0, 0, 0};
  if (phrase.tokens.empty() || ctx.tokens.empty()) return out;
  const auto query = represent_whole(phrase.vectors, opt.representation);
  SpanIndexOptions io;
  io.spans = opt.spans;
  io.representation = opt.representation;
  io.mode = StorageMode::lazy;
  const auto index = SpanIndex::build(rec.id, std::move(ctx.tokens), std::move(ctx.vectors), io, rec.context);
  if (const auto best = best_span_match(query, index)) {
    out.prediction = best->score;
    out.char_start = best->char_start;
    out.char_end = best->char_end;
  }
  return out;
}

RecordPrediction predict_per_ngram(const EvalRecord& rec, const Encoder& encoder, const EvalOptions& opt) {
  const Encoded phrase = encoder.encode(rec.origin_phrase);
  RecordPrediction out{rec.id, rec.gold_score, 0.0, 0, 0};
  if (phrase.tokens.empty()) return out;
  const auto query = represent_whole(phrase.vectors, opt.representation);

  const TokenSequence ctx = tokenize(rec.context);
  const auto spans = enumerate_spans(ctx.size(), opt.spans);
  std::vector<std::string> texts;
  texts.reserve(spans.size());
  for (const auto& s : spans) {
    const std::size_t lo = ctx[s.start].char_start;
    const std::size_t hi = ctx[s.end - 1].char_end;
    texts.push_back(rec.context.substr(lo, hi - lo));
  }
  const auto encoded = encoder.encode_batch(texts);
  if (encoded.size() != spans.size()) throw Error("encoder returned a wrong number of n-gram encodings");

  bool found = false;
  for (std::size_t i = 0; i < spans.size(); ++i) {
    const auto rep = represent_whole(encoded[i].vectors, opt.representation);
    if (rep.empty()) continue;
    const double score = normalized_cosine(query, rep);
    if (!found || score > out.prediction) {
      found = true;
      out.prediction = score;
      out.char_start = ctx[spans[i].start].char_start;
      out.char_end = ctx[spans[i].end - 1].char_end;
    }
  }
  return out;
}

void require_same_records(const SetupResult& a, const SetupResult& b) {
  if (a.predictions.size() != b.predictions.size()) {
    throw Error("setups " + std::string(to_string(a.setup)) + " and " + std::string(to_string(b.setup)) +
                " cover different record counts");
  }
  for (std::size_t i = 0; i < a.predictions.size(); ++i) {
    const auto& x = a.predictions[i];
    const auto& y = b.predictions[i];
    if (x.id != y.id || x.gold != y.gold) {
      throw Error("setups " + std::string(to_string(a.setup)) + " and " + std::string(to_string(b.setup)) +
                  " disagree at record " + std::to_string(i) + " ('" + x.id + "' vs '" + y.id + "')");
    }
  }
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_double(const std::string& s, const std::filesystem::path& path, std::size_t line) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  throw FormatError(path.string() + ":" + std::to_string(line) + ": bad number '" + s + "'");
}

std::size_t parse_size(const std::string& s, const std::filesystem::path& path, std::size_t line) {
  try {
    std::size_t used = 0;
    const auto v = std::stoull(s, &used);
    if (used == s.size()) return static_cast<std::size_t>(v);
  } catch (const std::exception&) {
  }
  throw FormatError(path.string() + ":" + std::to_string(line) + ": bad count '" + s + "'");
}

}  // namespace

std::string_view to_string(Setup s) {
  switch (s) {
    case Setup::full_context:
      return "full_context";
    case Setup::per_ngram:
      return "per_ngram";
    case Setup::single_pass:
      return "single_pass";
  }
  return "?";
}

Setup parse_setup(std::string_view s) {
  if (s == "full" || s == "full_context" || s == "full-context") return Setup::full_context;
  if (s == "per-ngram" || s == "per_ngram") return Setup::per_ngram;
  if (s == "single-pass" || s == "single_pass") return Setup::single_pass;
  throw Error("unknown setup '" + std::string(s) + "'");
}

std::vector<Setup> all_setups() { return {Setup::full_context, Setup::per_ngram, Setup::single_pass}; }

std::vector<RecordPrediction> predict_setup(std::span<const EvalRecord> records, const Encoder& encoder, Setup setup,
                                            const EvalOptions& options) {
  options.spans.validate();
  std::vector<RecordPrediction> out(records.size());
  parallel_for(records.size(), options.threads, [&](std::size_t i) {
    const auto& rec = records[i];
    try {
      switch (setup) {
        case Setup::full_context:
          out[i] = predict_full(rec, encoder);
          break;
        case Setup::per_ngram:
          out[i] = predict_per_ngram(rec, encoder, options);
          break;
        case Setup::single_pass:
          out[i] = predict_single(rec, encoder, options);
          break;
      }
    } catch (const std::exception& e) {
      throw Error("record '" + rec.id + "': " + e.what());
    }
  });
  return out;
}

SetupResult eval_setup(std::span<const EvalRecord> records, const Encoder& encoder, Setup setup,
                       const EvalOptions& options) {
  if (records.empty()) throw DegenerateInput("no records to evaluate");
  SetupResult result;
  result.setup = setup;
  result.predictions = predict_setup(records, encoder, setup, options);
  std::vector<double> gold, pred;
  gold.reserve(records.size());
  pred.reserve(records.size());
  for (const auto& p : result.predictions) {
    gold.push_back(p.gold);
    pred.push_back(p.prediction);
  }
  result.correlation = correlate(gold, pred);
  return result;
}

WilliamsComparison compare_setups(const SetupResult& a, const SetupResult& b) {
  require_same_records(a, b);
  const std::size_t n = a.predictions.size();
  std::vector<double> gold(n), pa(n), pb(n);
  for (std::size_t i = 0; i < n; ++i) {
    gold[i] = a.predictions[i].gold;
    pa[i] = a.predictions[i].prediction;
    pb[i] = b.predictions[i].prediction;
  }
  WilliamsComparison c;
  c.a = a.setup;
  c.b = b.setup;
  c.r12 = pearson(gold, pa);
  c.r13 = pearson(gold, pb);
  c.r23 = pa == pb ? 1.0 : pearson(pa, pb);
  const auto w = williams_test(c.r12, c.r13, c.r23, n);
  c.t = w.t;
  c.p = w.p;
  c.significant = w.p < 0.05;
  return c;
}

EvalReport build_report(std::vector<SetupResult> setups, std::vector<std::pair<std::string, std::string>> config) {
  if (setups.size() < 2) throw Error("a report needs at least two setups");
  EvalReport report;
  report.config = std::move(config);
  for (std::size_t i = 0; i < setups.size(); ++i) {
    for (std::size_t j = i + 1; j < setups.size(); ++j) {
      report.comparisons.push_back(compare_setups(setups[i], setups[j]));
    }
  }
  report.setups = std::move(setups);
  return report;
}

std::filesystem::path predictions_path(const std::filesystem::path& report_path) {
  auto p = report_path;
  p += ".predictions.tsv";
  return p;
}

void write_report(const std::filesystem::path& path, const EvalReport& report) {
  {
    std::ofstream out(path);
    if (!out) throw Error("cannot open " + path.string() + " for writing");
    for (const auto& [k, v] : report.config) out << "config\t" << k << '\t' << v << '\n';
    for (const auto& s : report.setups) {
      out << "setup\t" << to_string(s.setup) << '\t' << fmt(s.correlation.pearson) << '\t'
          << fmt(s.correlation.spearman) << '\t' << s.correlation.n << '\n';
    }
    for (const auto& c : report.comparisons) {
      out << "williams\t" << to_string(c.a) << '\t' << to_string(c.b) << '\t' << fmt(c.r12) << '\t' << fmt(c.r13)
          << '\t' << fmt(c.r23) << '\t' << fmt(c.t) << '\t' << fmt(c.p) << '\t' << (c.significant ? 1 : 0) << '\n';
    }
    if (!out) throw Error("write failed: " + path.string());
  }
  const auto pred_path = predictions_path(path);
  std::ofstream out(pred_path);
  if (!out) throw Error("cannot open " + pred_path.string() + " for writing");
  out << "id\tsetup\tgold\tprediction\tchar_start\tchar_end\n";
  for (const auto& s : report.setups) {
    for (const auto& p : s.predictions) {
      out << p.id << '\t' << to_string(s.setup) << '\t' << fmt(p.gold) << '\t' << fmt(p.prediction) << '\t'
          << p.char_start << '\t' << p.char_end << '\n';
    }
  }
  if (!out) throw Error("write failed: " + pred_path.string());
}

EvalReport read_report(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  EvalReport report;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto f = split_tsv(line);
    const auto bad = [&] { return FormatError(path.string() + ":" + std::to_string(line_no) + ": malformed line"); };
    if (f[0] == "config") {
      if (f.size() != 3) throw bad();
      report.config.emplace_back(f[1], f[2]);
    } else if (f[0] == "setup") {
      if (f.size() != 5) throw bad();
      SetupResult s;
      s.setup = parse_setup(f[1]);
      s.correlation = {parse_double(f[2], path, line_no), parse_double(f[3], path, line_no),
                       parse_size(f[4], path, line_no)};
      report.setups.push_back(std::move(s));
    } else if (f[0] == "williams") {
      if (f.size() != 9) throw bad();
      WilliamsComparison c;
      c.a = parse_setup(f[1]);
      c.b = parse_setup(f[2]);
      c.r12 = parse_double(f[3], path, line_no);
      c.r13 = parse_double(f[4], path, line_no);
      c.r23 = parse_double(f[5], path, line_no);
      c.t = parse_double(f[6], path, line_no);
      c.p = parse_double(f[7], path, line_no);
      c.significant = f[8] == "1";
      report.comparisons.push_back(c);
    } else {
      throw bad();
    }
  }

  const auto pred_path = predictions_path(path);
  std::ifstream pin(pred_path);
  if (!pin) return report;
  std::map<Setup, SetupResult*> by_setup;
  for (auto& s : report.setups) by_setup[s.setup] = &s;
  line_no = 0;
  while (std::getline(pin, line)) {
    ++line_no;
    if (line_no == 1 || line.empty()) continue;
    const auto f = split_tsv(line);
    if (f.size() != 6) throw FormatError(pred_path.string() + ":" + std::to_string(line_no) + ": malformed line");
    const auto it = by_setup.find(parse_setup(f[1]));
    if (it == by_setup.end()) {
      throw FormatError(pred_path.string() + ":" + std::to_string(line_no) + ": setup missing from summary");
    }
    it->second->predictions.push_back({f[0], parse_double(f[2], pred_path, line_no),
                                       parse_double(f[3], pred_path, line_no), parse_size(f[4], pred_path, line_no),
                                       parse_size(f[5], pred_path, line_no)});
  }
  return report;
}

}  // namespace spanmine
