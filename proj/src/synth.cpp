#include "spanmine/synth.hpp"

#include <algorithm>
#include <random>
#include <unordered_set>

#include "spanmine/error.hpp"

namespace spanmine {
namespace {

constexpr std::string_view kConsonants = "bdfgklmnprstvz";
constexpr std::string_view kVowels = "aeiou";

class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : rng_(seed) {}

  // Uniform in [lo, hi].
  std::size_t range(std::size_t lo, std::size_t hi) { return lo + static_cast<std::size_t>(rng_() % (hi - lo + 1)); }

  // Uniform in [0, 1).
  double unit() { return static_cast<double>(rng_() >> 11) * (1.0 / 9007199254740992.0); }

  std::size_t word_excluding(std::size_t vocab, const std::unordered_set<std::size_t>& excluded) {
    while (true) {
      const std::size_t w = range(0, vocab - 1);
      if (!excluded.contains(w)) return w;
    }
  }

 private:
  std::mt19937_64 rng_;
};

std::string join_sentence(const std::vector<std::size_t>& words) {
  std::string out;
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (i > 0) out += ' ';
    out += synth_word(words[i]);
  }
  if (!out.empty()) out[0] = static_cast<char>(out[0] - 'a' + 'A');
  return out;
}

}  // namespace

void SynthParams::validate() const {
  if (vocab_size < 2 * phrase_max + 2) throw Error("vocabulary too small for the phrase length");
  if (phrase_min == 0 || phrase_min > phrase_max) throw Error("phrase length range must satisfy 1 <= min <= max");
  if (context_min > context_max) throw Error("context length range must satisfy min <= max");
  if (count == 0) throw Error("count must be positive");
  if (noise_rates.empty()) throw Error("at least one noise rate is required");
  for (double r : noise_rates) {
    if (!(r >= 0.0 && r <= 1.0)) throw Error("noise rates must lie in [0, 1]");
  }
}

std::string synth_word(std::size_t index) {
  const std::size_t base = kConsonants.size() * kVowels.size();
  std::size_t v = index + base;  // at least two syllables
  std::string out;
  while (v > 0) {
    const std::size_t syl = v % base;
    out.insert(out.begin(), kVowels[syl % kVowels.size()]);
    out.insert(out.begin(), kConsonants[syl / kVowels.size()]);
    v /= base;
  }
  return out;
}

SynthOutput synth_generate(const SynthParams& params) {
  params.validate();
  Sampler rng(params.seed);
  SynthOutput out;
  out.records.reserve(params.count);
  out.triples.reserve(params.count);
  out.targets.reserve(params.count);

  for (std::size_t i = 0; i < params.count; ++i) {
    const std::size_t len = rng.range(params.phrase_min, params.phrase_max);
    std::unordered_set<std::size_t> phrase_set;
    std::vector<std::size_t> phrase;
    while (phrase.size() < len) {
      const std::size_t w = rng.word_excluding(params.vocab_size, phrase_set);
      phrase_set.insert(w);
      phrase.push_back(w);
    }

    const double rate = params.noise_rates[i % params.noise_rates.size()];
    std::vector<std::size_t> para = phrase;
    std::size_t replaced = 0;
    for (auto& w : para) {
      if (rng.unit() < rate) {
        w = rng.word_excluding(params.vocab_size, phrase_set);
        ++replaced;
      }
    }

    const std::size_t ctx_len = rng.range(params.context_min, params.context_max);
    const std::size_t left = rng.range(0, ctx_len);
    std::vector<std::size_t> context;
    context.reserve(ctx_len + len);
    for (std::size_t k = 0; k < left; ++k) context.push_back(rng.word_excluding(params.vocab_size, phrase_set));
    context.insert(context.end(), para.begin(), para.end());
    for (std::size_t k = left; k < ctx_len; ++k) context.push_back(rng.word_excluding(params.vocab_size, phrase_set));

    std::vector<std::size_t> negative;
    negative.reserve(ctx_len + len);
    for (std::size_t k = 0; k < ctx_len + len; ++k) {
      negative.push_back(rng.word_excluding(params.vocab_size, phrase_set));
    }

    std::string context_text = join_sentence(context) + ".";
    // Character range of the paraphrase: skip the left words and their separators.
    std::size_t start = 0;
    for (std::size_t k = 0; k < left; ++k) start += synth_word(context[k]).size() + 1;
    std::size_t end = start;
    for (std::size_t k = 0; k < len; ++k) end += synth_word(para[k]).size() + (k > 0 ? 1 : 0);

    EvalRecord rec;
    rec.id = "synth-" + std::to_string(i);
    rec.gold_score = 5.0 * (1.0 - static_cast<double>(replaced) / static_cast<double>(len));
    rec.origin_phrase = join_sentence(phrase) + ".";
    rec.context = context_text;
    out.records.push_back(rec);
    out.triples.push_back({rec.origin_phrase, context_text, join_sentence(negative) + "."});
    out.targets.push_back({start, end, replaced, rate});
  }
  return out;
}

}  // namespace spanmine
