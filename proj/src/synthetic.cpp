#include "ctxassoc/synthetic.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <limits>
#include <string>
#include <vector>

#include "ctxassoc/rng.hpp"

namespace ctxassoc {

namespace {

struct GroundingEntry {
  const char* id;
  ContextCategory category;
};

constexpr std::array<GroundingEntry, 8> kGroundingPool = {{
    {"taxonomy:9606", ContextCategory::Species},
    {"taxonomy:10090", ContextCategory::Species},
    {"taxonomy:10116", ContextCategory::Species},
    {"tissuelist:TS-0725", ContextCategory::TissueType},
    {"tissuelist:TS-0500", ContextCategory::TissueType},
    {"tissuelist:TS-0013", ContextCategory::TissueType},
    {"cellosaurus:CVCL_0023", ContextCategory::CellLine},
    {"cellosaurus:CVCL_0030", ContextCategory::CellLine},
}};

constexpr std::array<const char*, 6> kDependencyLabels = {"nsubj", "dobj",
                                                          "det",   "amod",
                                                          "prep",  "neg"};

constexpr std::array<const char*, 10> kPosPool = {"NN", "NNS", "VBD", "VBZ", "VBP",
                                                  "VBN", "DT", "JJ", "IN", "PRP"};

constexpr std::array<const char*, 16> kNounPool = {
    "cells",    "protein",   "kinase",   "expression", "pathway", "receptor",
    "mutation", "signaling", "activity", "complex",    "tissue",  "activation",
    "response", "binding",   "membrane", "culture"};

constexpr std::array<const char*, 3> kPronounPool = {"we", "it", "they"};

std::string word_for(const char* pos, Rng& rng) {
  const std::string tag(pos);
  if (tag == "PRP") return kPronounPool[rng.below(kPronounPool.size())];
  return kNounPool[rng.below(kNounPool.size())];
}

Sentence random_sentence(const SynthParams& params, Rng& rng) {
  Sentence s;
  const int n = static_cast<int>(rng.range(params.min_tokens, params.max_tokens));
  s.tokens.reserve(static_cast<size_t>(n));
  for (int t = 0; t < n; ++t) {
    const char* pos = kPosPool[rng.below(kPosPool.size())];
    s.tokens.push_back(Token{word_for(pos, rng), pos});
  }
  s.root = 0;
  for (int t = 1; t < n; ++t) {
    const int parent = static_cast<int>(rng.below(static_cast<std::uint64_t>(t)));
    s.edges.push_back(DependencyEdge{parent, t,
                                     kDependencyLabels[rng.below(kDependencyLabels.size())]});
  }
  return s;
}

} // namespace

Corpus generate_synthetic_corpus(std::uint64_t seed, const SynthParams& params) {
  Corpus corpus;
  corpus.documents.reserve(static_cast<size_t>(params.n_papers));
  const int types = std::min(params.types_per_paper,
                             std::min(params.contexts_per_paper,
                                      static_cast<int>(kGroundingPool.size())));

  for (int p = 0; p < params.n_papers; ++p) {
    Rng rng(mix_seed(seed, static_cast<std::uint64_t>(p)));
    Document doc;
    {
      char buf[16];
      std::snprintf(buf, sizeof(buf), "SYN%05d", p);
      doc.paper_id = buf;
    }

    for (int s = 0; s < params.sentences_per_paper; ++s)
      doc.sentences.push_back(random_sentence(params, rng));

    for (int e = 0; e < params.events_per_paper; ++e) {
      EventMention event;
      event.id = "E" + std::to_string(e);
      event.sentence = static_cast<int>(rng.below(static_cast<std::uint64_t>(params.sentences_per_paper)));
      const int n = static_cast<int>(doc.sentences[static_cast<size_t>(event.sentence)].tokens.size());
      const int len = rng.bernoulli(0.3) && n > 1 ? 2 : 1;
      event.start = static_cast<int>(rng.below(static_cast<std::uint64_t>(n - len + 1)));
      event.end = event.start + len;
      doc.events.push_back(std::move(event));
    }

    const auto type_idx = rng.sample_indices(kGroundingPool.size(), static_cast<size_t>(types));
    for (int m = 0; m < params.contexts_per_paper; ++m) {
      // first `types` mentions guarantee one mention per type
      const size_t which = m < types ? static_cast<size_t>(m) : rng.below(static_cast<std::uint64_t>(types));
      const GroundingEntry& entry = kGroundingPool[type_idx[which]];
      ContextMention mention;
      mention.id = "C" + std::to_string(m);
      mention.sentence = static_cast<int>(rng.below(static_cast<std::uint64_t>(params.sentences_per_paper)));
      const int n = static_cast<int>(doc.sentences[static_cast<size_t>(mention.sentence)].tokens.size());
      mention.start = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
      mention.end = mention.start + 1;
      mention.grounding_id = entry.id;
      mention.category = entry.category;
      doc.contexts.push_back(std::move(mention));
    }

    // plant gold labels following the signal rule
    for (const EventMention& event : doc.events) {
      for (size_t t = 0; t < static_cast<size_t>(types); ++t) {
        const std::string grounding = kGroundingPool[type_idx[t]].id;
        int min_dist = std::numeric_limits<int>::max();
        int frequency = 0;
        const ContextMention* nearest = nullptr;
        for (const ContextMention& c : doc.contexts) {
          if (c.grounding_id != grounding) continue;
          ++frequency;
          const int dist = std::abs(event.sentence - c.sentence);
          if (dist < min_dist) {
            min_dist = dist;
            nearest = &c;
          }
        }
        if (frequency == 0) continue;
        bool positive = min_dist <= params.signal.window &&
                        (params.signal.min_frequency <= 0 ||
                         frequency >= params.signal.min_frequency);
        if (params.signal.noise > 0.0 && rng.bernoulli(params.signal.noise))
          positive = !positive;
        if (positive)
          doc.gold.push_back(GoldAssociation{event.id, nearest->id});
      }
    }
    corpus.documents.push_back(std::move(doc));
  }
  return corpus;
}

Corpus generate_synthetic_corpus(std::uint64_t seed, int n_papers, int events_per_paper,
                                 int contexts_per_paper, const SignalSpec& signal) {
  SynthParams params;
  params.n_papers = n_papers;
  params.events_per_paper = events_per_paper;
  params.contexts_per_paper = contexts_per_paper;
  params.signal = signal;
  return generate_synthetic_corpus(seed, params);
}

} // namespace ctxassoc
