#include "spanmine/cli.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <CLI11.hpp>

#include "spanmine/bm25.hpp"
#include "spanmine/encoder.hpp"
#include "spanmine/error.hpp"
#include "spanmine/eval.hpp"
#include "spanmine/similarity.hpp"
#include "spanmine/synth.hpp"
#include "spanmine/trainer.hpp"

namespace spanmine {
namespace {

struct Globals {
  std::size_t min_span = 1;
  std::size_t max_span = 20;
  std::string encoder = "toy";
  std::string strategy = "mean";
  std::uint64_t seed = 0;
  std::size_t toy_dim = 64;
  std::size_t toy_window = 2;
  double toy_mix = 1.0;
  std::size_t threads = 0;

  SpanConfig spans() const {
    SpanConfig c{min_span, max_span};
    c.validate();
    return c;
  }
  std::unique_ptr<Encoder> make() const { return make_encoder(encoder, seed, {toy_dim, toy_window, toy_mix}); }
};

std::string one_line(std::string s) {
  std::replace_if(s.begin(), s.end(), [](char c) { return c == '\t' || c == '\n' || c == '\r'; }, ' ');
  return s;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// ---------------------------------------------------------------------------------------------

struct IndexArgs {
  std::string input;
  std::string output;
  std::string mode = "lazy";
  bool norms = false;
};

int cmd_index(const Globals& g, const IndexArgs& a, std::ostream& out) {
  std::ifstream in(a.input);
  if (!in) throw Error("cannot open " + a.input);
  std::vector<std::string> ids, texts;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos || tab == 0) {
      throw FormatError(a.input + ":" + std::to_string(line_no) + ": expected doc_id<TAB>text");
    }
    ids.push_back(line.substr(0, tab));
    texts.push_back(line.substr(tab + 1));
  }

  const auto encoder = g.make();
  SpanIndexOptions opt;
  opt.spans = g.spans();
  opt.representation = parse_representation(g.strategy);
  opt.mode = parse_storage_mode(a.mode);
  opt.store_norms = a.norms;

  auto encoded = encoder->encode_batch(texts);
  std::vector<SpanIndex> indexes;
  indexes.reserve(ids.size());
  std::size_t spans = 0;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    indexes.push_back(SpanIndex::build(ids[i], std::move(encoded[i].tokens), std::move(encoded[i].vectors), opt,
                                       std::move(texts[i])));
    spans += indexes.back().span_count();
  }
  save_span_indexes(a.output, indexes, encoder->id());
  out << "indexed " << indexes.size() << " documents, " << spans << " spans\n";
  return 0;
}

// ---------------------------------------------------------------------------------------------

struct SearchArgs {
  std::string index;
  std::string query;
  std::size_t top_k = 10;
};

int cmd_search(const Globals& g, const SearchArgs& a, std::ostream& out) {
  const auto loaded = load_span_indexes(a.index);
  const auto encoder = g.make();
  if (encoder->id() != loaded.encoder_id) {
    throw Error("index was built with encoder " + loaded.encoder_id + " but the query encoder is " + encoder->id());
  }
  if (loaded.indexes.empty()) return 0;
  const Encoded q = encoder->encode(a.query);
  if (q.tokens.empty()) throw DegenerateInput("query has no tokens");
  const auto query = represent_query(q.vectors, loaded.indexes.front().options().representation);
  for (const auto& hit : top_k_search(query, loaded.indexes, a.top_k, g.threads)) {
    const auto& idx = *std::find_if(loaded.indexes.begin(), loaded.indexes.end(),
                                    [&](const SpanIndex& i) { return i.doc_id() == hit.doc_id; });
    out << hit.doc_id << '\t' << fmt(hit.score) << '\t' << hit.char_start << '\t' << hit.char_end << '\t'
        << one_line(idx.span_text(hit.span)) << '\n';
  }
  return 0;
}

// ---------------------------------------------------------------------------------------------

struct EvalArgs {
  std::string data;
  std::string setup = "all";
  std::string output;
  bool lenient = false;
  bool header = false;
  std::vector<std::string> columns;
};

ColumnMap resolve_columns(const EvalArgs& a) {
  if (a.columns.empty()) {
    if (!a.header) return {};
    std::ifstream in(a.data);
    std::string first;
    if (!in || !std::getline(in, first)) throw FormatError(a.data + ": missing header line");
    return ColumnMap::from_header(first);
  }
  if (a.columns.size() != 3 && a.columns.size() != 4) {
    throw Error("--columns takes score,origin,context[,id]");
  }
  const bool numeric = std::all_of(a.columns.begin(), a.columns.end(), [](const std::string& c) {
    return !c.empty() && std::all_of(c.begin(), c.end(), [](char ch) { return ch >= '0' && ch <= '9'; });
  });
  if (numeric) {
    ColumnMap m;
    m.score = std::stoul(a.columns[0]);
    m.origin_phrase = std::stoul(a.columns[1]);
    m.context = std::stoul(a.columns[2]);
    if (a.columns.size() == 4) m.id = std::stoul(a.columns[3]);
    return m;
  }
  if (!a.header) throw Error("column names need --header");
  std::ifstream in(a.data);
  std::string first;
  if (!in || !std::getline(in, first)) throw FormatError(a.data + ": missing header line");
  return ColumnMap::from_header(first, a.columns[0], a.columns[1], a.columns[2],
                                a.columns.size() == 4 ? a.columns[3] : std::string("id"));
}

int cmd_eval(const Globals& g, const EvalArgs& a, std::ostream& out, std::ostream& err) {
  LoadOptions lo;
  lo.columns = resolve_columns(a);
  lo.has_header = a.header;
  lo.lenient = a.lenient;
  const auto loaded = load_stsb_context(a.data, lo);
  for (const auto& d : loaded.skipped) err << a.data << ":" << d.line << ": skipped: " << d.message << '\n';
  if (loaded.records.empty()) throw DegenerateInput("no records to evaluate in " + a.data);

  const auto encoder = g.make();
  EvalOptions eo;
  eo.spans = g.spans();
  eo.representation = parse_representation(g.strategy);
  eo.threads = g.threads;

  std::vector<Setup> setups = a.setup == "all" ? all_setups() : std::vector<Setup>{parse_setup(a.setup)};
  std::vector<SetupResult> results;
  for (Setup s : setups) results.push_back(eval_setup(loaded.records, *encoder, s, eo));

  std::vector<std::pair<std::string, std::string>> config = {
      {"min_span", std::to_string(eo.spans.min_size)},
      {"max_span", std::to_string(eo.spans.max_size)},
      {"encoder", encoder->id()},
      {"strategy", std::string(to_string(eo.representation))},
      {"seed", std::to_string(g.seed)},
      {"records", std::to_string(loaded.records.size())},
      {"skipped", std::to_string(loaded.skipped.size())},
  };
  EvalReport report;
  if (results.size() >= 2) {
    report = build_report(std::move(results), std::move(config));
  } else {
    report.config = std::move(config);
    report.setups = std::move(results);
  }
  write_report(a.output, report);

  std::ifstream summary(a.output);
  out << summary.rdbuf();
  return 0;
}

// ---------------------------------------------------------------------------------------------

struct TrainArgs {
  std::string triples;
  std::string output;
  std::string init;
  std::size_t steps = 200;
  double lr = 0.1;
  std::size_t batch = 1;
  std::size_t log_every = 0;
  std::size_t passage_max_span = SpanConfig::training().max_size;
  double lambda = 30.0;
};

int cmd_train(const Globals& g, const TrainArgs& a, std::ostream& out) {
  const auto triples = load_msmarco_triples(a.triples);
  if (triples.empty()) throw DegenerateInput("no triples in " + a.triples);
  const ToyEncoderParams init = a.init.empty() ? ToyEncoderParams::mixing(g.toy_dim, g.toy_window, g.seed, g.toy_mix)
                                               : load_toy_params(a.init);
  TrainHyper h;
  h.lr = a.lr;
  h.steps = a.steps;
  h.seed = g.seed;
  h.batch_size = a.batch;
  h.log_every = a.log_every;
  h.loss.lambda = a.lambda;
  h.loss.spans = {g.min_span, a.passage_max_span};
  h.loss.validate();

  const auto before = evaluate_triples(triples, init, h.loss);
  const auto result = train_toy(triples, init, h);
  const auto after = evaluate_triples(triples, result.params, h.loss);
  save_toy_params(result.params, a.output);

  out << "step\tmean_loss\tmean_separation\n";
  out << 0 << '\t' << fmt(before.mean_loss) << '\t' << fmt(before.mean_separation) << '\n';
  for (const auto& p : result.curve) out << p.step << '\t' << fmt(p.mean_loss) << '\t' << fmt(p.mean_separation) << '\n';
  out << "final\t" << fmt(after.mean_loss) << '\t' << fmt(after.mean_separation) << '\n';
  return 0;
}

// ---------------------------------------------------------------------------------------------

struct SynthArgs {
  SynthParams params;
  std::string records;
  std::string triples;
  std::string targets;
};

int cmd_synth(const Globals& g, SynthArgs a, std::ostream& out) {
  if (a.records.empty() && a.triples.empty()) throw Error("synth needs --records and/or --triples");
  a.params.seed = g.seed;
  const auto data = synth_generate(a.params);
  if (!a.records.empty()) write_eval_records(a.records, data.records);
  if (!a.triples.empty()) write_triples(a.triples, data.triples);
  if (!a.targets.empty()) {
    std::ofstream t(a.targets);
    if (!t) throw Error("cannot open " + a.targets + " for writing");
    t << "id\tchar_start\tchar_end\treplaced\tnoise_rate\n";
    for (std::size_t i = 0; i < data.records.size(); ++i) {
      const auto& x = data.targets[i];
      t << data.records[i].id << '\t' << x.char_start << '\t' << x.char_end << '\t' << x.replaced << '\t'
        << fmt(x.noise_rate) << '\n';
    }
  }
  out << "generated " << data.records.size() << " records\n";
  return 0;
}

// ---------------------------------------------------------------------------------------------

struct Bm25Args {
  std::string corpus;
  std::string query;
  std::string doc;
  std::string stats_cache;
  Bm25Params params;
};

int cmd_bm25(const Bm25Args& a, std::ostream& out) {
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::directory_iterator(a.corpus)) {
    if (e.is_regular_file() && e.path().extension() == ".txt") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw DegenerateInput("no .txt documents in " + a.corpus);

  std::vector<std::string> ids;
  std::vector<TokenSequence> docs;
  for (const auto& f : files) {
    std::ifstream in(f);
    std::stringstream ss;
    ss << in.rdbuf();
    ids.push_back(f.stem().string());
    docs.push_back(tokenize(ss.str()));
  }

  const CorpusStats stats = [&] {
    if (!a.stats_cache.empty() && std::filesystem::exists(a.stats_cache)) return load_corpus_stats(a.stats_cache);
    auto s = build_corpus_stats(docs);
    if (!a.stats_cache.empty()) save_corpus_stats(s, a.stats_cache);
    return s;
  }();

  const TokenSequence query = tokenize(a.query);
  std::vector<std::pair<std::string, double>> scores;
  for (std::size_t i = 0; i < docs.size(); ++i) {
    if (!a.doc.empty() && ids[i] != a.doc && files[i].filename() != std::filesystem::path(a.doc).filename()) continue;
    scores.emplace_back(ids[i], bm25_score(query, docs[i], stats, a.params));
  }
  if (!a.doc.empty() && scores.empty()) throw Error("document '" + a.doc + "' not found in " + a.corpus);
  std::stable_sort(scores.begin(), scores.end(), [](const auto& x, const auto& y) { return x.second > y.second; });
  for (const auto& [id, s] : scores) out << id << '\t' << fmt(s) << '\n';
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"spanmine: phrase mining over contextual token embeddings"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--min-span", g.min_span, "Minimum span length in tokens")->capture_default_str();
  app.add_option("--max-span", g.max_span, "Maximum span length in tokens")->capture_default_str();
  app.add_option("--encoder", g.encoder, "toy | toy:<params> | static:<path> | extern:<cmd>")->capture_default_str();
  app.add_option("--strategy", g.strategy, "Span representation: mean | endpoint")
      ->check(CLI::IsMember({"mean", "endpoint"}))
      ->capture_default_str();
  app.add_option("--seed", g.seed, "Seed for encoders, generators and training")->capture_default_str();
  app.add_option("--toy-dim", g.toy_dim, "Toy encoder dimension")->capture_default_str();
  app.add_option("--toy-window", g.toy_window, "Toy encoder context window")->capture_default_str();
  app.add_option("--toy-mix", g.toy_mix, "Toy encoder context mixing scale")->capture_default_str();
  app.add_option("--threads", g.threads, "Worker threads (0 = automatic)")->capture_default_str();

  IndexArgs ia;
  auto* index = app.add_subcommand("index", "Encode documents and write a span index");
  index->add_option("--input", ia.input, "TSV of doc_id<TAB>text")->required();
  index->add_option("--out", ia.output, "Index file")->required();
  index->add_option("--mode", ia.mode, "lazy | materialized")
      ->check(CLI::IsMember({"lazy", "materialized"}))
      ->capture_default_str();
  index->add_flag("--norms", ia.norms, "Store per-span norms");

  SearchArgs sa;
  auto* search = app.add_subcommand("search", "Find the best-matching span per document");
  search->add_option("--index", sa.index, "Index file")->required();
  search->add_option("--query", sa.query, "Query phrase")->required();
  search->add_option("--top-k", sa.top_k, "Documents to report")->capture_default_str();

  EvalArgs ea;
  auto* eval = app.add_subcommand("eval", "Correlate setup predictions with gold scores");
  eval->add_option("--data", ea.data, "Evaluation TSV")->required();
  eval->add_option("--setup", ea.setup, "full | per-ngram | single-pass | all")
      ->check(CLI::IsMember({"full", "per-ngram", "single-pass", "all"}))
      ->capture_default_str();
  eval->add_option("--out", ea.output, "Report file (predictions go to <out>.predictions.tsv)")->required();
  eval->add_flag("--lenient", ea.lenient, "Skip malformed rows");
  eval->add_flag("--header", ea.header, "First line is a header");
  eval->add_option("--columns", ea.columns, "score,origin,context[,id] as indices or header names")
      ->delimiter(',');

  TrainArgs ta;
  auto* train = app.add_subcommand("train-toy", "Train the toy encoder with the SLICE loss");
  train->add_option("--triples", ta.triples, "TSV of query<TAB>positive<TAB>negative")->required();
  train->add_option("--out", ta.output, "Output params file")->required();
  train->add_option("--init", ta.init, "Initial params file (default: mixing toy encoder)");
  train->add_option("--steps", ta.steps, "Gradient steps")->capture_default_str();
  train->add_option("--lr", ta.lr, "Learning rate")->capture_default_str();
  train->add_option("--batch", ta.batch, "Triples per step")->capture_default_str();
  train->add_option("--log-every", ta.log_every, "Steps per curve point (0 = one pass)")->capture_default_str();
  train->add_option("--passage-max-span", ta.passage_max_span, "Maximum passage span length")
      ->capture_default_str();
  train->add_option("--lambda", ta.lambda, "Loss scale")->capture_default_str();

  SynthArgs ya;
  auto* synth = app.add_subcommand("synth", "Generate a planted-paraphrase dataset");
  synth->add_option("--count", ya.params.count, "Records")->capture_default_str();
  synth->add_option("--vocab", ya.params.vocab_size, "Vocabulary size")->capture_default_str();
  synth->add_option("--noise", ya.params.noise_rates, "Noise rates, cycled over records")->delimiter(',');
  synth->add_option("--phrase-min", ya.params.phrase_min)->capture_default_str();
  synth->add_option("--phrase-max", ya.params.phrase_max)->capture_default_str();
  synth->add_option("--context-min", ya.params.context_min)->capture_default_str();
  synth->add_option("--context-max", ya.params.context_max)->capture_default_str();
  synth->add_option("--records", ya.records, "Evaluation TSV output");
  synth->add_option("--triples", ya.triples, "Triples TSV output");
  synth->add_option("--targets", ya.targets, "Planted span offsets output");

  Bm25Args ba;
  auto* bm25 = app.add_subcommand("bm25", "Okapi BM25 scores over a directory of .txt documents");
  bm25->add_option("--corpus", ba.corpus, "Directory of .txt files (doc id = file stem)")->required();
  bm25->add_option("--query", ba.query, "Query text")->required();
  bm25->add_option("--doc", ba.doc, "Score only this document (doc id or file name)");
  bm25->add_option("--stats-cache", ba.stats_cache, "Corpus statistics cache (read if present, else written)");
  bm25->add_option("--k1", ba.params.k1)->capture_default_str();
  bm25->add_option("--b", ba.params.b)->capture_default_str();
  bm25->add_option("--epsilon", ba.params.epsilon)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (*index) return cmd_index(g, ia, out);
    if (*search) return cmd_search(g, sa, out);
    if (*eval) return cmd_eval(g, ea, out, err);
    if (*train) return cmd_train(g, ta, out);
    if (*synth) return cmd_synth(g, ya, out);
    if (*bm25) return cmd_bm25(ba, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());
  return run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace spanmine
