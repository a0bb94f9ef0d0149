#include "ctxassoc/aggregate.hpp"

#include <stdexcept>

namespace ctxassoc {

Vector densify(const PairFeatureVector& v, const FeatureVocabulary& vocabulary) {
  const int d = vocabulary.dimension();
  Vector out = Vector::Zero(d);
  out[0] = v.sentence_distance;
  out[1] = v.dependency_distance;
  out[2] = v.context_type_frequency;
  out[3] = v.is_context_closest ? 1.0 : 0.0;
  out[4] = v.evt_phi.first_person ? 1.0 : 0.0;
  out[5] = v.evt_phi.past_tense ? 1.0 : 0.0;
  out[6] = v.evt_phi.present_tense ? 1.0 : 0.0;
  out[7] = v.ctx_phi.first_person ? 1.0 : 0.0;
  out[8] = v.ctx_phi.past_tense ? 1.0 : 0.0;
  out[9] = v.ctx_phi.present_tense ? 1.0 : 0.0;
  out[10] = v.evt_negated ? 1.0 : 0.0;
  out[11] = v.ctx_negated ? 1.0 : 0.0;

  const int evt_base = kDenseFeatureCount;
  for (const auto& [bigram, count] : v.evt_bigrams) {
    auto it = vocabulary.event_bigrams.find(bigram);
    if (it != vocabulary.event_bigrams.end()) out[evt_base + it->second] = count;
  }
  const int ctx_base = kDenseFeatureCount + static_cast<int>(vocabulary.event_bigrams.size());
  for (const auto& [bigram, count] : v.ctx_bigrams) {
    auto it = vocabulary.context_bigrams.find(bigram);
    if (it != vocabulary.context_bigrams.end()) out[ctx_base + it->second] = count;
  }
  return out;
}

std::vector<FeatureGroup> column_groups(const FeatureVocabulary& vocabulary) {
  std::vector<FeatureGroup> groups;
  groups.reserve(static_cast<size_t>(vocabulary.dimension()));
  groups.push_back(FeatureGroup::SentenceDistance);
  groups.push_back(FeatureGroup::DependencyDistance);
  groups.push_back(FeatureGroup::ContextTypeFrequency);
  groups.push_back(FeatureGroup::IsContextClosest);
  groups.push_back(FeatureGroup::EvtFirstPerson);
  groups.push_back(FeatureGroup::EvtPastTense);
  groups.push_back(FeatureGroup::EvtPresentTense);
  groups.push_back(FeatureGroup::CtxFirstPerson);
  groups.push_back(FeatureGroup::CtxPastTense);
  groups.push_back(FeatureGroup::CtxPresentTense);
  groups.push_back(FeatureGroup::EvtNegated);
  groups.push_back(FeatureGroup::CtxNegated);
  for (size_t i = 0; i < vocabulary.event_bigrams.size(); ++i)
    groups.push_back(FeatureGroup::EvtSpanningBigrams);
  for (size_t i = 0; i < vocabulary.context_bigrams.size(); ++i)
    groups.push_back(FeatureGroup::CtxSpanningBigrams);
  return groups;
}

AggregatedInstance aggregate(const TypeLevelCandidate& candidate,
                             const std::vector<Vector>& pair_vectors) {
  if (pair_vectors.empty())
    throw std::invalid_argument("aggregate: candidate '" + candidate.event_id + "' x '" +
                                candidate.grounding_id + "' has no pair vectors");
  const Index d = pair_vectors.front().size();
  Vector mean = Vector::Zero(d);
  Vector min = pair_vectors.front();
  Vector max = pair_vectors.front();
  for (const Vector& v : pair_vectors) {
    if (v.size() != d)
      throw std::invalid_argument("aggregate: inconsistent pair vector dimensions");
    mean += v;
    min = min.cwiseMin(v);
    max = max.cwiseMax(v);
  }
  mean /= static_cast<Real>(pair_vectors.size());

  AggregatedInstance out;
  out.paper_id = candidate.paper_id;
  out.event_id = candidate.event_id;
  out.grounding_id = candidate.grounding_id;
  out.label = candidate.label;
  out.vector.resize(3 * d);
  out.vector << mean, min, max;
  return out;
}

AggregatedInstance aggregate_candidate(const TypeLevelCandidate& candidate, const Document& doc,
                                       const FeatureVocabulary& vocabulary) {
  std::vector<Vector> vectors;
  vectors.reserve(candidate.pairs.size());
  for (const MentionPair& pair : candidate.pairs)
    vectors.push_back(densify(extract_pair_features(pair, doc), vocabulary));
  return aggregate(candidate, vectors);
}

} // namespace ctxassoc
