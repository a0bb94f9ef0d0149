#include "ctxassoc/instances.hpp"

#include <algorithm>

#include <json.hpp>

namespace ctxassoc {

bool category_allowed(ContextCategory c, CategoryFilter filter) {
  if (filter == CategoryFilter::All) return true;
  return c == ContextCategory::Species || c == ContextCategory::TissueType ||
         c == ContextCategory::CellLine;
}

std::map<std::string, std::set<std::string>> project_gold(const Document& doc) {
  std::map<std::string, std::set<std::string>> out;
  for (const EventMention& e : doc.events) out[e.id]; // events with no links map to {}
  for (const GoldAssociation& g : doc.gold) {
    const ContextMention* mention = doc.find_context(g.context_mention_id);
    if (mention) out[g.event_id].insert(mention->grounding_id);
  }
  return out;
}

std::vector<TypeLevelCandidate> build_candidates(const Document& doc, CategoryFilter filter) {
  // mention indices per grounding id, document order; sorted keys keep the
  // candidate list deterministic
  std::map<std::string, std::vector<int>> by_grounding;
  for (int ci = 0; ci < static_cast<int>(doc.contexts.size()); ++ci) {
    const ContextMention& c = doc.contexts[static_cast<size_t>(ci)];
    if (category_allowed(c.category, filter))
      by_grounding[c.grounding_id].push_back(ci);
  }

  const auto gold = project_gold(doc);

  std::vector<TypeLevelCandidate> out;
  out.reserve(doc.events.size() * by_grounding.size());
  for (int ei = 0; ei < static_cast<int>(doc.events.size()); ++ei) {
    const EventMention& event = doc.events[static_cast<size_t>(ei)];
    const auto gold_it = gold.find(event.id);
    for (const auto& [grounding, mentions] : by_grounding) {
      TypeLevelCandidate cand;
      cand.paper_id = doc.paper_id;
      cand.event_id = event.id;
      cand.grounding_id = grounding;
      cand.pairs.reserve(mentions.size());
      for (int ci : mentions) cand.pairs.push_back(MentionPair{ei, ci});
      cand.label = gold_it != gold.end() && gold_it->second.count(grounding) > 0;
      out.push_back(std::move(cand));
    }
  }
  return out;
}

std::string candidate_to_jsonl(const TypeLevelCandidate& cand, const Document& doc) {
  nlohmann::json pairs = nlohmann::json::array();
  for (const MentionPair& p : cand.pairs) {
    const EventMention& e = doc.events[static_cast<size_t>(p.event_index)];
    const ContextMention& c = doc.contexts[static_cast<size_t>(p.context_index)];
    pairs.push_back({{"event_sentence", e.sentence}, {"context_sentence", c.sentence}});
  }
  nlohmann::json j{{"paper_id", cand.paper_id},
                   {"event_id", cand.event_id},
                   {"grounding_id", cand.grounding_id},
                   {"pairs", pairs},
                   {"label", cand.label}};
  return j.dump();
}

} // namespace ctxassoc
