#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "ctxassoc/corpus.hpp"

namespace ctxassoc {

// A (event mention, context mention) pair inside one document; stored as
// indices into the owning Document's events/contexts arrays.
struct MentionPair {
  int event_index = 0;
  int context_index = 0;
};

// One type-level example: an event paired with every mention of one context
// type (grounding id) in the document, labeled against the gold annotations.
struct TypeLevelCandidate {
  std::string paper_id;
  std::string event_id;
  std::string grounding_id;
  std::vector<MentionPair> pairs; // non-empty, exhaustive for the grounding id
  bool label = false;
};

// Which context-mention categories participate in candidate generation.
// Restricted mirrors the corpus restriction to species, tissue types and
// cell lines; All keeps every category in the data model.
enum class CategoryFilter { Restricted, All };

bool category_allowed(ContextCategory c, CategoryFilter filter);

// Grounding ids of the context mentions each event is gold-linked to.
std::map<std::string, std::set<std::string>> project_gold(const Document& doc);

// One candidate per (event, distinct grounding id); positives and negatives
// partition the full cross product.
std::vector<TypeLevelCandidate> build_candidates(const Document& doc,
                                                 CategoryFilter filter = CategoryFilter::Restricted);

// JSON-lines inspection dump: one candidate per line with pair sentence
// indices and the label.
std::string candidate_to_jsonl(const TypeLevelCandidate& cand, const Document& doc);

} // namespace ctxassoc
