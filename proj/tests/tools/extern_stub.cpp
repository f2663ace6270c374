// Encoder process for protocol tests: answers each request line with the toy encoder
// (d=8, w=1, seed=5). A request whose text is "!fail" exits with status 3.

#include <iostream>
#include <string>

#include <json.hpp>

#include "spanmine/encoder.hpp"

int main() {
  const spanmine::ToyEncoder enc(spanmine::ToyEncoderParams::mixing(8, 1, 5, 1.0));
  std::string line;
  while (std::getline(std::cin, line)) {
    if (line.empty()) continue;
    const auto req = nlohmann::json::parse(line);
    const std::string text = req.at("text");
    if (text == "!fail") return 3;
    const auto e = enc.encode(text);
    std::cout << spanmine::format_response_line(req.at("id").get<std::string>(), e.tokens, e.vectors) << '\n';
  }
  return 0;
}
