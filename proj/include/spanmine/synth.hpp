#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "spanmine/dataset.hpp"

namespace spanmine {

/// Planted-paraphrase dataset generator.
///
/// Record i samples a phrase of distinct vocabulary words, copies it into a paraphrase in which
/// each word is replaced by a random other word with probability noise_rates[i % size], and
/// embeds the paraphrase at a random position inside random context words (never drawn from the
/// phrase's own words). gold = 5 * (1 - replaced / phrase length). Every record also yields a
/// training triple (phrase, its context, a fresh random context of the same length).
struct SynthParams {
  std::size_t vocab_size = 5000;
  std::size_t phrase_min = 3;
  std::size_t phrase_max = 6;
  std::size_t context_min = 10;  // surrounding words, excluding the paraphrase
  std::size_t context_max = 25;
  std::vector<double> noise_rates = {0.0, 0.25, 0.5, 0.75, 1.0};
  std::size_t count = 200;
  std::uint64_t seed = 0;

  void validate() const;
};

struct PlantedTarget {
  std::size_t char_start = 0;  // paraphrase location inside the context
  std::size_t char_end = 0;
  std::size_t replaced = 0;    // words substituted
  double noise_rate = 0.0;
};

struct SynthOutput {
  std::vector<EvalRecord> records;
  std::vector<Triple> triples;
  std::vector<PlantedTarget> targets;
};

/// Deterministic under params.seed.
SynthOutput synth_generate(const SynthParams& params);

/// The word for vocabulary index i: consonant-vowel syllables, unique per index.
std::string synth_word(std::size_t index);

}  // namespace spanmine
