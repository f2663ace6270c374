#include <sstream>

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "spanmine/bm25.hpp"
#include "spanmine/cli.hpp"
#include "spanmine/encoder.hpp"
#include "spanmine/error.hpp"
#include "spanmine/similarity.hpp"
#include "spanmine/slice.hpp"
#include "spanmine/stats.hpp"
#include "spanmine/synth.hpp"

namespace py = pybind11;
using namespace spanmine;

namespace {

using F64Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

Matrix<double> to_matrix(const F64Array& a) {
  if (a.ndim() != 2) throw DimensionMismatch("expected a 2-D array");
  const auto rows = static_cast<std::size_t>(a.shape(0));
  const auto cols = static_cast<std::size_t>(a.shape(1));
  return Matrix<double>(rows, cols, std::vector<double>(a.data(), a.data() + rows * cols));
}

template <typename T>
py::array_t<T> to_array(const Matrix<T>& m) {
  py::array_t<T> out({m.rows(), m.cols()});
  std::copy(m.data().begin(), m.data().end(), out.mutable_data());
  return out;
}

SpanConfig span_config(std::size_t min_size, std::size_t max_size) {
  SpanConfig c{min_size, max_size};
  c.validate();
  return c;
}

py::list token_list(const TokenSequence& tokens) {
  py::list out;
  for (const auto& t : tokens) out.append(py::make_tuple(t.text, t.char_start, t.char_end));
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Span enumeration, span-max similarity search, the SLICE loss and evaluation statistics.";

  py::register_exception<Error>(m, "Error", PyExc_ValueError);

  m.def("tokenize", [](const std::string& text) { return token_list(tokenize(text)); },
        "List of (text, char_start, char_end); offsets are UTF-8 byte offsets.");

  m.def("span_count", [](std::size_t n, std::size_t a, std::size_t b) { return span_count(n, span_config(a, b)); },
        py::arg("n"), py::arg("min_size") = 1, py::arg("max_size") = 20);

  m.def(
      "enumerate_spans",
      [](std::size_t n, std::size_t a, std::size_t b) {
        std::vector<std::pair<std::size_t, std::size_t>> out;
        for (const auto& s : enumerate_spans(n, span_config(a, b))) out.emplace_back(s.start, s.end);
        return out;
      },
      py::arg("n"), py::arg("min_size") = 1, py::arg("max_size") = 20);

  m.def(
      "mean_pool",
      [](const F64Array& rows, std::size_t start, std::size_t end) {
        return mean_pool({start, end}, build_prefix(to_matrix(rows)));
      },
      py::arg("rows"), py::arg("start"), py::arg("end"));

  py::class_<ToyEncoder>(m, "ToyEncoder")
      .def(py::init([](std::size_t dim, std::size_t window, std::uint64_t seed, double mix) {
             return ToyEncoder(ToyEncoderParams::mixing(dim, window, seed, mix));
           }),
           py::arg("dim") = 64, py::arg("window") = 2, py::arg("seed") = 0, py::arg("mix") = 1.0)
      .def_property_readonly("dim", &ToyEncoder::dim)
      .def_property_readonly("id", &ToyEncoder::id)
      .def(
          "encode",
          [](const ToyEncoder& enc, const std::string& text) {
            const Encoded e = enc.encode(text);
            return py::make_tuple(token_list(e.tokens), to_array<float>(e.vectors));
          },
          "Returns (tokens, float32 array of shape (n, dim)).");

  py::class_<ScoredSpan>(m, "BestSpan")
      .def_readonly("doc_id", &ScoredSpan::doc_id)
      .def_property_readonly("start", [](const ScoredSpan& s) { return s.span.start; })
      .def_property_readonly("end", [](const ScoredSpan& s) { return s.span.end; })
      .def_readonly("score", &ScoredSpan::score)
      .def_readonly("char_start", &ScoredSpan::char_start)
      .def_readonly("char_end", &ScoredSpan::char_end);

  m.def(
      "best_span",
      [](const F64Array& query_rows, const F64Array& doc_rows, std::size_t a, std::size_t b,
         const std::string& strategy) -> std::optional<ScoredSpan> {
        const auto q = to_matrix(query_rows);
        const auto d = to_matrix(doc_rows);
        SpanIndexOptions opt;
        opt.spans = span_config(a, b);
        opt.representation = parse_representation(strategy);
        std::vector<Token> toks;
        for (std::size_t i = 0; i < d.rows(); ++i) toks.push_back({"t" + std::to_string(i), 2 * i, 2 * i + 1});
        const auto index = SpanIndex::build("doc", TokenSequence(std::move(toks)), to_embedding(d), opt);
        const auto query = represent_query(q.cast<float>(), opt.representation);
        return best_span_match(query, index);
      },
      py::arg("query_rows"), py::arg("doc_rows"), py::arg("min_size") = 1, py::arg("max_size") = 20,
      py::arg("strategy") = "mean", "Best span of the document rows for the pooled query rows.");

  py::class_<LossOutput>(m, "LossOutput")
      .def_readonly("loss", &LossOutput::loss)
      .def_readonly("sim_true", &LossOutput::sim_true)
      .def_readonly("sim_false", &LossOutput::sim_false)
      .def_property_readonly("argmax_true", [](const LossOutput& o) { return py::make_tuple(o.argmax_true.start, o.argmax_true.end); })
      .def_property_readonly("argmax_false", [](const LossOutput& o) { return py::make_tuple(o.argmax_false.start, o.argmax_false.end); });

  py::class_<SliceGradient>(m, "SliceGradient")
      .def_readonly("forward", &SliceGradient::forward)
      .def_property_readonly("d_query", [](const SliceGradient& g) { return to_array<double>(g.d_query); })
      .def_property_readonly("d_true", [](const SliceGradient& g) { return to_array<double>(g.d_true); })
      .def_property_readonly("d_false", [](const SliceGradient& g) { return to_array<double>(g.d_false); });

  m.def("softplus", &softplus);
  m.def(
      "slice_forward",
      [](const F64Array& q, const F64Array& pt, const F64Array& pf, double lambda, std::size_t a, std::size_t b) {
        return slice_forward(to_matrix(q), to_matrix(pt), to_matrix(pf), {lambda, span_config(a, b)});
      },
      py::arg("query"), py::arg("p_true"), py::arg("p_false"), py::arg("lam") = 30.0, py::arg("min_size") = 1,
      py::arg("max_size") = 10);
  m.def(
      "slice_gradient",
      [](const F64Array& q, const F64Array& pt, const F64Array& pf, double lambda, std::size_t a, std::size_t b) {
        return slice_gradient(to_matrix(q), to_matrix(pt), to_matrix(pf), {lambda, span_config(a, b)});
      },
      py::arg("query"), py::arg("p_true"), py::arg("p_false"), py::arg("lam") = 30.0, py::arg("min_size") = 1,
      py::arg("max_size") = 10);

  m.def("pearson", [](const std::vector<double>& x, const std::vector<double>& y) { return pearson(x, y); });
  m.def("spearman", [](const std::vector<double>& x, const std::vector<double>& y) { return spearman(x, y); });

  py::class_<WilliamsResult>(m, "Williams")
      .def_readonly("t", &WilliamsResult::t)
      .def_readonly("p", &WilliamsResult::p)
      .def_readonly("df", &WilliamsResult::df);
  m.def("williams_test", &williams_test, py::arg("r12"), py::arg("r13"), py::arg("r23"), py::arg("n"));

  m.def(
      "bm25_scores",
      [](const std::string& query, const std::vector<std::string>& docs, double k1, double b, double eps) {
        std::vector<TokenSequence> toks;
        for (const auto& d : docs) toks.push_back(tokenize(d));
        const auto stats = build_corpus_stats(toks);
        const auto q = tokenize(query);
        std::vector<double> out;
        for (const auto& t : toks) out.push_back(bm25_score(q, t, stats, {k1, b, eps}));
        return out;
      },
      py::arg("query"), py::arg("docs"), py::arg("k1") = 1.5, py::arg("b") = 0.75, py::arg("epsilon") = 0.25,
      "BM25 score of the query against every document, with corpus statistics from the documents.");

  m.def(
      "synth_generate",
      [](std::size_t count, std::uint64_t seed, std::vector<double> noise_rates) {
        SynthParams p;
        p.count = count;
        p.seed = seed;
        if (!noise_rates.empty()) p.noise_rates = std::move(noise_rates);
        const auto data = synth_generate(p);
        py::list records, triples;
        for (std::size_t i = 0; i < data.records.size(); ++i) {
          const auto& r = data.records[i];
          const auto& t = data.targets[i];
          records.append(py::dict(py::arg("id") = r.id, py::arg("gold") = r.gold_score,
                                  py::arg("origin_phrase") = r.origin_phrase, py::arg("context") = r.context,
                                  py::arg("char_start") = t.char_start, py::arg("char_end") = t.char_end));
        }
        for (const auto& t : data.triples) triples.append(py::make_tuple(t.query, t.positive, t.negative));
        return py::make_tuple(records, triples);
      },
      py::arg("count") = 200, py::arg("seed") = 0, py::arg("noise_rates") = std::vector<double>{});

  m.def(
      "run_cli",
      [](std::vector<std::string> args) {
        args.insert(args.begin(), "spanmine");
        std::ostringstream out, err;
        const int code = run_cli(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      "Runs a spanmine command; returns (exit_code, stdout, stderr).");
}
