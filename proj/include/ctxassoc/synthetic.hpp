#pragma once

#include <cstdint>

#include "ctxassoc/corpus.hpp"

namespace ctxassoc {

// Labeling rule planted into generated corpora: a (event, context type)
// candidate is positive iff the nearest mention of the type lies within
// `window` sentences and, when min_frequency > 0, the type has at least that
// many mentions in the paper. Labels are then flipped with probability `noise`.
struct SignalSpec {
  int window = 1;
  int min_frequency = 0;
  double noise = 0.0;
};

struct SynthParams {
  int n_papers = 22;
  int events_per_paper = 8;
  int contexts_per_paper = 14; // context mentions per paper
  int types_per_paper = 5;     // distinct grounding ids per paper
  int sentences_per_paper = 14;
  int min_tokens = 5;
  int max_tokens = 9;
  SignalSpec signal;
};

Corpus generate_synthetic_corpus(std::uint64_t seed, const SynthParams& params);

Corpus generate_synthetic_corpus(std::uint64_t seed, int n_papers, int events_per_paper,
                                 int contexts_per_paper, const SignalSpec& signal);

} // namespace ctxassoc
