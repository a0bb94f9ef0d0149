#pragma once

#include <string>
#include <vector>

#include "ctxassoc/features.hpp"
#include "ctxassoc/types.hpp"

namespace ctxassoc {

// mean ⊕ min ⊕ max over the densified pair vectors of one candidate.
struct AggregatedInstance {
  std::string paper_id;
  std::string event_id;
  std::string grounding_id;
  Vector vector; // length 3 * vocabulary.dimension()
  bool label = false;
};

// Fixed column layout: the 12 dense features in catalog order, then event
// bigram counts by vocabulary index, then context bigram counts. Bigrams
// absent from the vocabulary are dropped.
Vector densify(const PairFeatureVector& pair_vector, const FeatureVocabulary& vocabulary);

// FeatureGroup owning each densified column, same layout as densify.
std::vector<FeatureGroup> column_groups(const FeatureVocabulary& vocabulary);

AggregatedInstance aggregate(const TypeLevelCandidate& candidate,
                             const std::vector<Vector>& pair_vectors);

// Convenience: extract, densify and aggregate a candidate's pairs.
AggregatedInstance aggregate_candidate(const TypeLevelCandidate& candidate, const Document& doc,
                                       const FeatureVocabulary& vocabulary);

} // namespace ctxassoc
