#include <doctest.h>

#include <sstream>

#include "spanmine/cli.hpp"
#include "spanmine/dataset.hpp"
#include "spanmine/eval.hpp"
#include "spanmine/span_index.hpp"
#include "spanmine/toy_encoder.hpp"
#include "test_util.hpp"

using namespace spanmine;

namespace {

struct Run {
  int code = 0;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "spanmine");
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

}  // namespace

TEST_CASE("help and bad arguments") {
  CHECK(run({"--help"}).code == 0);
  CHECK(run({"search"}).code != 0);
  CHECK(run({"nonsense"}).code != 0);
}

TEST_CASE("index and search") {
  testutil::TempDir dir;
  testutil::write_file(dir / "docs.tsv",
                       "d1\tThe quick brown fox jumps over the lazy dog.\n"
                       "d2\tA stitch in time saves nine.\n");
  const std::vector<std::string> toy = {"--toy-window", "0", "--toy-mix", "0", "--max-span", "5"};
  auto args = toy;
  args.insert(args.end(), {"index", "--input", (dir / "docs.tsv").string(), "--out", (dir / "i.saix").string()});
  const auto idx = run(args);
  INFO(idx.err);
  REQUIRE(idx.code == 0);
  CHECK(idx.out.find("indexed 2 documents") != std::string::npos);

  args = toy;
  args.insert(args.end(), {"search", "--index", (dir / "i.saix").string(), "--query", "brown fox", "--top-k", "2"});
  const auto res = run(args);
  REQUIRE(res.code == 0);
  const auto ls = lines(res.out);
  REQUIRE(ls.size() == 2);
  const auto f = split_tsv(ls[0]);
  REQUIRE(f.size() == 5);
  CHECK(f[0] == "d1");
  CHECK(std::stod(f[1]) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(f[2] == "10");
  CHECK(f[3] == "19");
  CHECK(f[4] == "brown fox");

  // An index built with one encoder cannot be searched with another.
  const auto mismatch = run({"search", "--index", (dir / "i.saix").string(), "--query", "fox"});
  CHECK(mismatch.code == 1);
  CHECK(mismatch.err.find("error:") != std::string::npos);
}

TEST_CASE("materialized index mode") {
  testutil::TempDir dir;
  testutil::write_file(dir / "docs.tsv", "d\tone two three four\n");
  const auto r = run({"--max-span", "3", "index", "--input", (dir / "docs.tsv").string(), "--out",
                      (dir / "m.saix").string(), "--mode", "materialized", "--norms"});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("9 spans") != std::string::npos);
  CHECK(run({"index", "--input", (dir / "docs.tsv").string(), "--out", (dir / "x").string(), "--mode", "eager"}).code !=
        0);
}

TEST_CASE("synth then eval") {
  testutil::TempDir dir;
  const auto s = run({"--seed", "3", "synth", "--count", "40", "--records", (dir / "r.tsv").string(), "--triples",
                      (dir / "t.tsv").string(), "--targets", (dir / "g.tsv").string()});
  REQUIRE(s.code == 0);
  CHECK(load_msmarco_triples(dir / "t.tsv").size() == 40);
  CHECK(lines(testutil::read_file(dir / "g.tsv")).size() == 41);

  const auto e = run({"--toy-dim", "16", "eval", "--data", (dir / "r.tsv").string(), "--setup", "all", "--columns",
                      "0,1,2,3", "--out", (dir / "rep.tsv").string()});
  REQUIRE(e.code == 0);
  const auto report = read_report(dir / "rep.tsv");
  CHECK(report.setups.size() == 3);
  CHECK(report.comparisons.size() == 3);
  CHECK(report.setups[0].predictions[0].id == "synth-0");
  CHECK(e.out.find("setup\tsingle_pass") != std::string::npos);

  const auto one = run({"--toy-dim", "16", "eval", "--data", (dir / "r.tsv").string(), "--setup", "single-pass",
                        "--out", (dir / "one.tsv").string()});
  REQUIRE(one.code == 0);
  CHECK(read_report(dir / "one.tsv").setups.size() == 1);
}

TEST_CASE("eval with header names and lenient rows") {
  testutil::TempDir dir;
  testutil::write_file(dir / "h.tsv",
                       "context\tscore\tphrase\n"
                       "alpha beta gamma delta\t4.0\tbeta gamma\n"
                       "one two three four\t9\ttwo\n"
                       "red green blue\t1.0\tpurple\n"
                       "sun moon star\t2.5\tmoon\n"
                       "rain snow hail\t3.5\tsnow hail\n");
  const std::vector<std::string> base = {"eval", "--data", (dir / "h.tsv").string(), "--header", "--columns",
                                         "score,phrase,context", "--out", (dir / "o.tsv").string()};
  CHECK(run(base).code == 1);
  auto lenient = base;
  lenient.push_back("--lenient");
  const auto r = run(lenient);
  INFO(r.err);
  REQUIRE(r.code == 0);
  CHECK(r.err.find(":3: skipped") != std::string::npos);
  CHECK(read_report(dir / "o.tsv").setups[0].correlation.n == 4);
}

TEST_CASE("train-toy writes loadable params and a curve") {
  testutil::TempDir dir;
  REQUIRE(run({"--seed", "1", "synth", "--count", "30", "--noise", "0", "--triples", (dir / "t.tsv").string()}).code ==
          0);
  const auto r = run({"--toy-dim", "8", "train-toy", "--triples", (dir / "t.tsv").string(), "--out",
                      (dir / "p.stoy").string(), "--steps", "20", "--log-every", "10"});
  REQUIRE(r.code == 0);
  const auto ls = lines(r.out);
  REQUIRE(ls.size() == 5);
  CHECK(ls[0] == "step\tmean_loss\tmean_separation");
  CHECK(ls[1].rfind("0\t", 0) == 0);
  CHECK(ls[4].rfind("final\t", 0) == 0);
  const auto p = load_toy_params(dir / "p.stoy");
  CHECK(p.dim == 8);

  // The trained file plugs back in as an encoder.
  testutil::write_file(dir / "docs.tsv", "d\talpha beta\n");
  CHECK(run({"--encoder", "toy:" + (dir / "p.stoy").string(), "index", "--input", (dir / "docs.tsv").string(), "--out",
             (dir / "i.saix").string()})
            .code == 0);
}

TEST_CASE("bm25 over a directory") {
  testutil::TempDir dir;
  std::filesystem::create_directories(dir / "c");
  testutil::write_file(dir / "c" / "a.txt", "The cat sat on the mat.");
  testutil::write_file(dir / "c" / "b.txt", "The dog sat on the log.");
  testutil::write_file(dir / "c" / "c.txt", "Cats and dogs!");
  testutil::write_file(dir / "c" / "ignored.md", "cat cat cat");
  const auto r = run({"bm25", "--corpus", (dir / "c").string(), "--query", "the cat", "--stats-cache",
                      (dir / "stats.bin").string()});
  REQUIRE(r.code == 0);
  const auto ls = lines(r.out);
  REQUIRE(ls.size() == 3);
  CHECK(split_tsv(ls[0])[0] == "a");
  CHECK(std::stod(split_tsv(ls[0])[1]) == doctest::Approx(0.53721455907414084).epsilon(1e-12));
  CHECK(std::filesystem::exists(dir / "stats.bin"));

  const auto one = run({"bm25", "--corpus", (dir / "c").string(), "--query", "the cat", "--doc", "b.txt",
                        "--stats-cache", (dir / "stats.bin").string()});
  REQUIRE(one.code == 0);
  REQUIRE(lines(one.out).size() == 1);
  CHECK(std::stod(split_tsv(lines(one.out)[0])[1]) == doctest::Approx(0.068567197820938355).epsilon(1e-12));
  CHECK(run({"bm25", "--corpus", (dir / "c").string(), "--query", "x", "--doc", "zzz"}).code == 1);
}
