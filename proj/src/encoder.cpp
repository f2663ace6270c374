#include "spanmine/encoder.hpp"

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include <json.hpp>

#include "spanmine/error.hpp"

namespace spanmine {

using nlohmann::json;

std::vector<Encoded> Encoder::encode_batch(std::span<const std::string> texts) const {
  std::vector<Encoded> out;
  out.reserve(texts.size());
  for (const auto& t : texts) out.push_back(encode(t));
  return out;
}

// ---------------------------------------------------------------------------------------------
// Toy

ToyEncoder::ToyEncoder(ToyEncoderParams params) : params_(std::move(params)) { params_.validate(); }

Encoded ToyEncoder::encode(std::string_view text) const {
  Encoded out;
  out.tokens = tokenize(text);
  out.vectors = toy_contextualize(toy_base_vectors(out.tokens, params_), params_);
  return out;
}

std::string ToyEncoder::id() const {
  std::uint64_t h = fnv1a64(std::string_view(reinterpret_cast<const char*>(params_.a.data().data()),
                                              params_.a.data().size() * sizeof(double)));
  h ^= splitmix64(fnv1a64(std::string_view(reinterpret_cast<const char*>(params_.b.data().data()),
                                           params_.b.data().size() * sizeof(double))));
  char hex[17];
  std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(h));
  return "toy(d=" + std::to_string(params_.dim) + ",w=" + std::to_string(params_.window) +
         ",seed=" + std::to_string(params_.seed) + ",ab=" + hex + ")";
}

// ---------------------------------------------------------------------------------------------
// Static vectors

StaticVectors::StaticVectors(std::size_t dim, std::unordered_map<std::string, std::vector<float>> table)
    : dim_(dim), table_(std::move(table)) {
  for (const auto& [token, vec] : table_) {
    if (vec.size() != dim_) throw DimensionMismatch("static vector for '" + token + "' has wrong dimension");
  }
}

StaticVectors StaticVectors::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open static vectors " + path.string());
  std::unordered_map<std::string, std::vector<float>> table;
  std::size_t dim = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string token;
    fields >> token;
    std::vector<float> vec;
    std::string field;
    while (fields >> field) {
      try {
        std::size_t used = 0;
        const float v = std::stof(field, &used);
        if (used != field.size()) throw std::invalid_argument(field);
        vec.push_back(v);
      } catch (const std::exception&) {
        throw FormatError(path.string() + ":" + std::to_string(line_no) + ": bad float '" + field + "'");
      }
    }
    if (line_no == 1 && vec.size() == 1) {
      // "<count> <dim>" header
      dim = static_cast<std::size_t>(vec[0]);
      continue;
    }
    if (dim == 0) dim = vec.size();
    if (vec.size() != dim || dim == 0) {
      throw FormatError(path.string() + ":" + std::to_string(line_no) + ": expected " + std::to_string(dim) +
                        " values, got " + std::to_string(vec.size()));
    }
    table.insert_or_assign(std::move(token), std::move(vec));
  }
  if (dim == 0) throw FormatError(path.string() + ": no vectors");
  return StaticVectors(dim, std::move(table));
}

const std::vector<float>* StaticVectors::find(const std::string& token) const {
  const auto it = table_.find(token);
  return it == table_.end() ? nullptr : &it->second;
}

StaticVectorEncoder::StaticVectorEncoder(std::shared_ptr<const StaticVectors> vectors, std::string source)
    : vectors_(std::move(vectors)), source_(std::move(source)) {
  if (!vectors_) throw Error("static vector table is null");
}

Encoded StaticVectorEncoder::encode(std::string_view text) const {
  Encoded out;
  out.tokens = tokenize(text);
  out.vectors = EmbeddingMatrix(out.tokens.size(), vectors_->dim());
  for (std::size_t i = 0; i < out.tokens.size(); ++i) {
    if (const auto* v = vectors_->find(out.tokens[i].text)) {
      std::copy(v->begin(), v->end(), out.vectors.row(i).begin());
    } else {
      out.unknown_tokens.push_back(i);
    }
  }
  return out;
}

std::string StaticVectorEncoder::id() const { return "static(" + source_ + ")"; }

// ---------------------------------------------------------------------------------------------
// External protocol

std::string format_request_line(std::string_view id, std::string_view text) {
  return json{{"id", std::string(id)}, {"text", std::string(text)}}.dump();
}

std::string format_response_line(std::string_view id, const TokenSequence& tokens, const Matrix<float>& vectors) {
  json toks = json::array();
  for (const auto& t : tokens) toks.push_back({{"text", t.text}, {"start", t.char_start}, {"end", t.char_end}});
  json vecs = json::array();
  for (std::size_t i = 0; i < vectors.rows(); ++i) {
    const auto r = vectors.row(i);
    vecs.push_back(std::vector<double>(r.begin(), r.end()));
  }
  return json{{"id", std::string(id)}, {"tokens", std::move(toks)}, {"vectors", std::move(vecs)}}.dump();
}

Encoded parse_response_line(std::string_view line, std::string_view expected_id) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::exception& e) {
    throw ProtocolError(std::string("response is not valid JSON: ") + e.what());
  }
  try {
    const auto id = j.at("id").get<std::string>();
    if (id != expected_id) {
      throw ProtocolError("response id '" + id + "' does not match request id '" + std::string(expected_id) + "'");
    }
    std::vector<Token> tokens;
    for (const auto& t : j.at("tokens")) {
      tokens.push_back({t.at("text").get<std::string>(), t.at("start").get<std::size_t>(),
                        t.at("end").get<std::size_t>()});
    }
    const auto& vecs = j.at("vectors");
    if (!vecs.is_array() || vecs.size() != tokens.size()) {
      throw ProtocolError("response '" + id + "': vector count does not match token count");
    }
    const std::size_t d = vecs.empty() ? 0 : vecs.front().size();
    Encoded out;
    out.tokens = TokenSequence(std::move(tokens));
    out.vectors = EmbeddingMatrix(vecs.size(), d, id);
    for (std::size_t i = 0; i < vecs.size(); ++i) {
      if (vecs[i].size() != d) throw ProtocolError("response '" + id + "': ragged vectors");
      auto row = out.vectors.row(i);
      for (std::size_t k = 0; k < d; ++k) row[k] = vecs[i][k].get<float>();
    }
    if (!out.vectors.all_finite()) throw ProtocolError("response '" + id + "': non-finite vector entries");
    return out;
  } catch (const json::exception& e) {
    throw ProtocolError(std::string("malformed response: ") + e.what());
  } catch (const ProtocolError&) {
    throw;
  } catch (const Error& e) {
    throw ProtocolError(std::string("malformed response: ") + e.what());
  }
}

namespace {

std::string shell_quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'') {
      out += "'\\''";
    } else {
      out += c;
    }
  }
  return out + "'";
}

std::filesystem::path unique_temp(std::string_view stem) {
  static std::atomic<unsigned> counter{0};
  return std::filesystem::temp_directory_path() /
         (std::string(stem) + "-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
}

}  // namespace

LineTransport subprocess_transport(std::string command) {
  return [command = std::move(command)](const std::vector<std::string>& requests) {
    const auto req_path = unique_temp("spanmine-req");
    const auto resp_path = unique_temp("spanmine-resp");
    {
      std::ofstream req(req_path);
      for (const auto& line : requests) req << line << '\n';
      if (!req) throw ProtocolError("cannot write request file " + req_path.string());
    }
    const std::string cmd = command + " < " + shell_quote(req_path.string()) + " > " + shell_quote(resp_path.string());
    const int rc = std::system(cmd.c_str());
    std::vector<std::string> lines;
    std::ifstream resp(resp_path);
    std::string line;
    while (std::getline(resp, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (!line.empty()) lines.push_back(std::move(line));
    }
    std::error_code ec;
    std::filesystem::remove(req_path, ec);
    std::filesystem::remove(resp_path, ec);
    if (rc != 0) throw ProtocolError("external encoder exited with status " + std::to_string(rc) + ": " + command);
    return lines;
  };
}

ExternalEncoder::ExternalEncoder(LineTransport transport, std::string description, std::size_t dim)
    : transport_(std::move(transport)), description_(std::move(description)), dim_(dim) {}

Encoded ExternalEncoder::encode(std::string_view text) const {
  const std::string t(text);
  auto out = encode_batch(std::span<const std::string>(&t, 1));
  return std::move(out.front());
}

std::vector<Encoded> ExternalEncoder::encode_batch(std::span<const std::string> texts) const {
  std::vector<std::string> requests;
  requests.reserve(texts.size());
  for (std::size_t i = 0; i < texts.size(); ++i) requests.push_back(format_request_line(std::to_string(i), texts[i]));
  const auto responses = transport_(requests);
  if (responses.size() != requests.size()) {
    throw ProtocolError("external encoder returned " + std::to_string(responses.size()) + " responses for " +
                        std::to_string(requests.size()) + " requests");
  }
  std::vector<Encoded> out;
  out.reserve(texts.size());
  for (std::size_t i = 0; i < responses.size(); ++i) {
    Encoded e = parse_response_line(responses[i], std::to_string(i));
    if (e.vectors.rows() > 0) {
      std::size_t expected = 0;
      dim_.compare_exchange_strong(expected, e.vectors.dim());
      const std::size_t d = dim_.load();
      if (e.vectors.dim() != d) {
        throw ProtocolError("external encoder dimension changed from " + std::to_string(d) + " to " +
                            std::to_string(e.vectors.dim()));
      }
    } else {
      e.vectors = EmbeddingMatrix(0, dim_.load());
    }
    e.vectors.set_doc_id({});
    out.push_back(std::move(e));
  }
  return out;
}

std::size_t ExternalEncoder::dim() const {
  if (dim_.load() == 0) {
    // Probe once with a single-word request.
    encode("probe");
  }
  return dim_.load();
}

// ---------------------------------------------------------------------------------------------

std::unique_ptr<Encoder> make_encoder(std::string_view spec, std::uint64_t seed, const ToyOptions& toy) {
  if (spec == "toy") {
    return std::make_unique<ToyEncoder>(ToyEncoderParams::mixing(toy.dim, toy.window, seed, toy.mix));
  }
  if (spec.starts_with("toy:")) {
    return std::make_unique<ToyEncoder>(load_toy_params(std::string(spec.substr(4))));
  }
  if (spec.starts_with("static:")) {
    const std::string path(spec.substr(7));
    return std::make_unique<StaticVectorEncoder>(std::make_shared<StaticVectors>(StaticVectors::load(path)), path);
  }
  if (spec.starts_with("extern:")) {
    const std::string cmd(spec.substr(7));
    return std::make_unique<ExternalEncoder>(subprocess_transport(cmd), cmd);
  }
  throw Error("unknown encoder spec '" + std::string(spec) + "' (expected toy, toy:<file>, static:<path>, extern:<cmd>)");
}

}  // namespace spanmine
