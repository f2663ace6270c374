#include "spanmine/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>

#include "spanmine/error.hpp"

namespace spanmine {
namespace {

std::optional<double> parse_double(const std::string& s) {
  std::size_t lo = 0, hi = s.size();
  while (lo < hi && (s[lo] == ' ')) ++lo;
  while (hi > lo && (s[hi - 1] == ' ')) --hi;
  if (lo == hi) return std::nullopt;
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data() + lo, s.data() + hi, v);
  if (ec != std::errc() || ptr != s.data() + hi || !std::isfinite(v)) return std::nullopt;
  return v;
}

std::string line_error(const std::filesystem::path& path, std::size_t line, const std::string& msg) {
  return path.string() + ":" + std::to_string(line) + ": " + msg;
}

std::string sanitize(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    if (c == '\t' || c == '\n' || c == '\r') c = ' ';
  }
  return out;
}

}  // namespace

std::vector<std::string> split_tsv(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (true) {
    const std::size_t tab = line.find('\t', pos);
    if (tab == std::string_view::npos) {
      out.emplace_back(line.substr(pos));
      break;
    }
    out.emplace_back(line.substr(pos, tab - pos));
    pos = tab + 1;
  }
  return out;
}

ColumnMap ColumnMap::from_header(std::string_view header_line, std::string_view score_name,
                                 std::string_view origin_name, std::string_view context_name,
                                 std::string_view id_name) {
  const auto names = split_tsv(header_line);
  auto find = [&](std::string_view name) -> std::optional<std::size_t> {
    for (std::size_t i = 0; i < names.size(); ++i) {
      if (names[i] == name) return i;
    }
    return std::nullopt;
  };
  ColumnMap m;
  const auto s = find(score_name);
  const auto o = find(origin_name);
  const auto c = find(context_name);
  if (!s || !o || !c) {
    throw FormatError("header is missing one of the columns '" + std::string(score_name) + "', '" +
                      std::string(origin_name) + "', '" + std::string(context_name) + "'");
  }
  m.score = *s;
  m.origin_phrase = *o;
  m.context = *c;
  m.id = find(id_name);
  return m;
}

EvalLoadResult load_stsb_context(const std::filesystem::path& path, const LoadOptions& options) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  const ColumnMap& cols = options.columns;
  std::size_t needed = std::max({cols.score, cols.origin_phrase, cols.context}) + 1;
  if (cols.id) needed = std::max(needed, *cols.id + 1);

  EvalLoadResult result;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1 && options.has_header) continue;
    if (line.empty() || line == "\r") continue;

    auto reject = [&](const std::string& msg) {
      if (!options.lenient) throw FormatError(line_error(path, line_no, msg));
      result.skipped.push_back({line_no, msg});
    };

    const auto fields = split_tsv(line);
    if (fields.size() < needed) {
      reject("expected at least " + std::to_string(needed) + " columns, got " + std::to_string(fields.size()));
      continue;
    }
    const auto score = parse_double(fields[cols.score]);
    if (!score) {
      reject("unparsable score '" + fields[cols.score] + "'");
      continue;
    }
    if (*score < 0.0 || *score > 5.0) {
      reject("score " + fields[cols.score] + " outside [0, 5]");
      continue;
    }
    EvalRecord r;
    r.gold_score = *score;
    r.origin_phrase = fields[cols.origin_phrase];
    r.context = fields[cols.context];
    r.id = cols.id ? fields[*cols.id] : std::to_string(line_no);
    if (r.origin_phrase.empty() || r.context.empty()) {
      reject("empty origin phrase or context");
      continue;
    }
    result.records.push_back(std::move(r));
  }
  return result;
}

std::vector<Triple> load_msmarco_triples(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  std::vector<Triple> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    auto fields = split_tsv(line);
    if (fields.size() != 3) {
      throw FormatError(line_error(path, line_no, "expected 3 tab-separated fields, got " +
                                                      std::to_string(fields.size())));
    }
    out.push_back({std::move(fields[0]), std::move(fields[1]), std::move(fields[2])});
  }
  return out;
}

void write_eval_records(const std::filesystem::path& path, std::span<const EvalRecord> records) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out.precision(17);
  for (const auto& r : records) {
    out << r.gold_score << '\t' << sanitize(r.origin_phrase) << '\t' << sanitize(r.context) << '\t'
        << sanitize(r.id) << '\n';
  }
  if (!out) throw Error("write failed: " + path.string());
}

void write_triples(const std::filesystem::path& path, std::span<const Triple> triples) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  for (const auto& t : triples) {
    out << sanitize(t.query) << '\t' << sanitize(t.positive) << '\t' << sanitize(t.negative) << '\n';
  }
  if (!out) throw Error("write failed: " + path.string());
}

}  // namespace spanmine
