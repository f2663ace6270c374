#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace spanmine {

/// One token. Offsets are UTF-8 byte offsets into the original text, half-open.
struct Token {
  std::string text;
  std::size_t char_start = 0;
  std::size_t char_end = 0;

  friend bool operator==(const Token&, const Token&) = default;
};

class TokenSequence {
 public:
  TokenSequence() = default;
  explicit TokenSequence(std::vector<Token> tokens);

  std::size_t size() const noexcept { return tokens_.size(); }
  bool empty() const noexcept { return tokens_.empty(); }
  const Token& operator[](std::size_t i) const noexcept { return tokens_[i]; }
  const std::vector<Token>& tokens() const noexcept { return tokens_; }
  auto begin() const noexcept { return tokens_.begin(); }
  auto end() const noexcept { return tokens_.end(); }

  std::vector<std::string> texts() const;

  friend bool operator==(const TokenSequence&, const TokenSequence&) = default;

 private:
  std::vector<Token> tokens_;
};

/// Lowercases, splits on Unicode whitespace and strips leading/trailing punctuation.
/// Tokens that are pure punctuation are dropped.
TokenSequence tokenize(std::string_view text);

/// 64-bit FNV-1a over the bytes of `s`.
std::uint64_t fnv1a64(std::string_view s) noexcept;

/// SplitMix64 finalizer.
std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Seed for a token's base vector: splitmix64(fnv1a64(text) ^ splitmix64(seed)).
std::uint64_t token_seed(std::string_view text, std::uint64_t seed) noexcept;

}  // namespace spanmine
