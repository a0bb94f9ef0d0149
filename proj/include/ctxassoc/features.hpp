#pragma once

#include <array>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ctxassoc/instances.hpp"

namespace ctxassoc {

// The 14 feature groups whose non-empty power set (16,383 subsets) drives the
// per-fold feature search.
enum class FeatureGroup : int {
  SentenceDistance = 0,
  DependencyDistance,
  ContextTypeFrequency,
  IsContextClosest,
  EvtFirstPerson,
  EvtPastTense,
  EvtPresentTense,
  CtxFirstPerson,
  CtxPastTense,
  CtxPresentTense,
  EvtSpanningBigrams,
  EvtNegated,
  CtxSpanningBigrams,
  CtxNegated,
};

inline constexpr int kFeatureGroupCount = 14;
inline constexpr int kDenseFeatureCount = 12; // all groups except the two bigram bags

const char* feature_group_name(FeatureGroup g);

using Bigram = std::pair<std::string, std::string>;
using BigramCounts = std::map<Bigram, int>;

struct PhiFeatures {
  bool first_person = false;
  bool past_tense = false;
  bool present_tense = false;
};

// Per mention-pair feature values: dense scalars plus the two bags of
// dependency-label bigrams.
struct PairFeatureVector {
  int sentence_distance = 0;
  int dependency_distance = 0;
  int context_type_frequency = 0;
  bool is_context_closest = false;
  PhiFeatures evt_phi;
  PhiFeatures ctx_phi;
  bool evt_negated = false;
  bool ctx_negated = false;
  BigramCounts evt_bigrams;
  BigramCounts ctx_bigrams;
  std::vector<std::string> warnings;
};

// Bigram -> column index per namespace, lexicographically ordered and built
// from training documents only; unseen bigrams are dropped at densify time.
struct FeatureVocabulary {
  std::map<Bigram, int> event_bigrams;
  std::map<Bigram, int> context_bigrams;

  int dimension() const {
    return kDenseFeatureCount + static_cast<int>(event_bigrams.size()) +
           static_cast<int>(context_bigrams.size());
  }
};

// Token in the span closest to the sentence root (undirected edge count);
// ties go to the leftmost token.
int head_token(int span_start, int span_end, const Sentence& sentence);

int sentence_distance(const EventMention& event, const ContextMention& context);

// Shortest undirected path between the two mention head tokens. Cross-sentence
// pairs get one artificial edge joining the two sentence roots. Disconnected
// heads yield the combined node count and a warning.
int dependency_distance(const MentionPair& pair, const Document& doc,
                        std::vector<std::string>* warnings = nullptr);

int context_type_frequency(const MentionPair& pair, const Document& doc);

// 1 iff no other context mention (any grounding id) is closer to the event,
// comparing by sentence distance then |span-start offset|; full ties mark
// every tied mention closest.
bool is_context_closest(const MentionPair& pair, const Document& doc);

PhiFeatures phi_features(const Sentence& sentence);

// Bag of label bigrams over all undirected 2-edge paths leaving `head`.
BigramCounts spanning_bigrams(int head, const Sentence& sentence);

// 1 iff a "neg" edge touches the depth-2 spanning neighborhood of `head`.
bool is_negated(int head, const Sentence& sentence);

PairFeatureVector extract_pair_features(const MentionPair& pair, const Document& doc);

FeatureVocabulary build_vocabulary(std::span<const Document> training_docs,
                                   CategoryFilter filter = CategoryFilter::Restricted);
FeatureVocabulary build_vocabulary(const std::vector<const Document*>& training_docs,
                                   CategoryFilter filter = CategoryFilter::Restricted);

// Feature dump format: dense fields by name, bigram bags as "label1|label2" counts.
std::string pair_features_to_jsonl(const PairFeatureVector& v);

} // namespace ctxassoc
