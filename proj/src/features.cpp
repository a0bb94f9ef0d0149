#include "ctxassoc/features.hpp"

#include <algorithm>
#include <cctype>
#include <limits>
#include <queue>
#include <set>

#include <json.hpp>

namespace ctxassoc {

namespace {

constexpr int kUnreachable = std::numeric_limits<int>::max();

// adjacency as (neighbor, edge index) over the undirected view of the graph
std::vector<std::vector<std::pair<int, int>>> adjacency(const Sentence& s) {
  std::vector<std::vector<std::pair<int, int>>> adj(s.tokens.size());
  for (int ei = 0; ei < static_cast<int>(s.edges.size()); ++ei) {
    const DependencyEdge& e = s.edges[static_cast<size_t>(ei)];
    adj[static_cast<size_t>(e.head)].push_back({e.dependent, ei});
    adj[static_cast<size_t>(e.dependent)].push_back({e.head, ei});
  }
  return adj;
}

std::vector<int> bfs_distances(const std::vector<std::vector<std::pair<int, int>>>& adj,
                               int source) {
  std::vector<int> dist(adj.size(), kUnreachable);
  std::queue<int> queue;
  dist[static_cast<size_t>(source)] = 0;
  queue.push(source);
  while (!queue.empty()) {
    int u = queue.front();
    queue.pop();
    for (auto [v, ei] : adj[static_cast<size_t>(u)]) {
      (void)ei;
      if (dist[static_cast<size_t>(v)] == kUnreachable) {
        dist[static_cast<size_t>(v)] = dist[static_cast<size_t>(u)] + 1;
        queue.push(v);
      }
    }
  }
  return dist;
}

bool lowercase_in_first_person_lexicon(const std::string& word) {
  static const std::set<std::string> lexicon = {"i", "we", "us", "our", "my", "ours", "mine"};
  std::string lower;
  lower.reserve(word.size());
  for (char c : word) lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  return lexicon.count(lower) > 0;
}

} // namespace

const char* feature_group_name(FeatureGroup g) {
  switch (g) {
    case FeatureGroup::SentenceDistance: return "sentence_distance";
    case FeatureGroup::DependencyDistance: return "dependency_distance";
    case FeatureGroup::ContextTypeFrequency: return "context_type_frequency";
    case FeatureGroup::IsContextClosest: return "is_context_closest";
    case FeatureGroup::EvtFirstPerson: return "evt_first_person";
    case FeatureGroup::EvtPastTense: return "evt_past_tense";
    case FeatureGroup::EvtPresentTense: return "evt_present_tense";
    case FeatureGroup::CtxFirstPerson: return "ctx_first_person";
    case FeatureGroup::CtxPastTense: return "ctx_past_tense";
    case FeatureGroup::CtxPresentTense: return "ctx_present_tense";
    case FeatureGroup::EvtSpanningBigrams: return "evt_spanning_bigrams";
    case FeatureGroup::EvtNegated: return "evt_negated";
    case FeatureGroup::CtxSpanningBigrams: return "ctx_spanning_bigrams";
    case FeatureGroup::CtxNegated: return "ctx_negated";
  }
  return "?";
}

int head_token(int span_start, int span_end, const Sentence& sentence) {
  const auto adj = adjacency(sentence);
  const auto depth = bfs_distances(adj, sentence.root);
  int best = span_start;
  int best_depth = depth[static_cast<size_t>(span_start)];
  for (int t = span_start + 1; t < span_end; ++t) {
    if (depth[static_cast<size_t>(t)] < best_depth) {
      best = t;
      best_depth = depth[static_cast<size_t>(t)];
    }
  }
  return best;
}

int sentence_distance(const EventMention& event, const ContextMention& context) {
  return std::abs(event.sentence - context.sentence);
}

int dependency_distance(const MentionPair& pair, const Document& doc,
                        std::vector<std::string>* warnings) {
  const EventMention& event = doc.events[static_cast<size_t>(pair.event_index)];
  const ContextMention& context = doc.contexts[static_cast<size_t>(pair.context_index)];
  const Sentence& evt_sent = doc.sentences[static_cast<size_t>(event.sentence)];
  const Sentence& ctx_sent = doc.sentences[static_cast<size_t>(context.sentence)];

  const int evt_head = head_token(event.start, event.end, evt_sent);
  const int ctx_head = head_token(context.start, context.end, ctx_sent);

  if (event.sentence == context.sentence) {
    const auto adj = adjacency(evt_sent);
    const int d = bfs_distances(adj, evt_head)[static_cast<size_t>(ctx_head)];
    if (d == kUnreachable) {
      if (warnings)
        warnings->push_back("unreachable heads in sentence " + std::to_string(event.sentence) +
                            " of " + doc.paper_id);
      return static_cast<int>(evt_sent.tokens.size());
    }
    return d;
  }

  // combined graph: event sentence tokens, then context sentence tokens,
  // plus one artificial root-root edge
  const int offset = static_cast<int>(evt_sent.tokens.size());
  std::vector<std::vector<std::pair<int, int>>> adj(evt_sent.tokens.size() +
                                                    ctx_sent.tokens.size());
  for (const DependencyEdge& e : evt_sent.edges) {
    adj[static_cast<size_t>(e.head)].push_back({e.dependent, -1});
    adj[static_cast<size_t>(e.dependent)].push_back({e.head, -1});
  }
  for (const DependencyEdge& e : ctx_sent.edges) {
    adj[static_cast<size_t>(e.head + offset)].push_back({e.dependent + offset, -1});
    adj[static_cast<size_t>(e.dependent + offset)].push_back({e.head + offset, -1});
  }
  adj[static_cast<size_t>(evt_sent.root)].push_back({ctx_sent.root + offset, -1});
  adj[static_cast<size_t>(ctx_sent.root + offset)].push_back({evt_sent.root, -1});

  const int d = bfs_distances(adj, evt_head)[static_cast<size_t>(ctx_head + offset)];
  if (d == kUnreachable) {
    if (warnings)
      warnings->push_back("unreachable heads between sentences " + std::to_string(event.sentence) +
                          " and " + std::to_string(context.sentence) + " of " + doc.paper_id);
    return static_cast<int>(adj.size());
  }
  return d;
}

int context_type_frequency(const MentionPair& pair, const Document& doc) {
  const std::string& grounding =
      doc.contexts[static_cast<size_t>(pair.context_index)].grounding_id;
  int count = 0;
  for (const ContextMention& c : doc.contexts)
    if (c.grounding_id == grounding) ++count;
  return count;
}

bool is_context_closest(const MentionPair& pair, const Document& doc) {
  const EventMention& event = doc.events[static_cast<size_t>(pair.event_index)];
  const ContextMention& mention = doc.contexts[static_cast<size_t>(pair.context_index)];
  const auto key = [&event](const ContextMention& c) {
    return std::make_pair(std::abs(event.sentence - c.sentence),
                          std::abs(event.start - c.start));
  };
  const auto own = key(mention);
  for (const ContextMention& other : doc.contexts)
    if (key(other) < own) return false;
  return true;
}

PhiFeatures phi_features(const Sentence& sentence) {
  PhiFeatures phi;
  for (const Token& t : sentence.tokens) {
    if (t.pos == "VBD" || t.pos == "VBN") phi.past_tense = true;
    if (t.pos == "VBP" || t.pos == "VBZ") phi.present_tense = true;
    if ((t.pos == "PRP" || t.pos == "PRP$") && lowercase_in_first_person_lexicon(t.word))
      phi.first_person = true;
  }
  return phi;
}

BigramCounts spanning_bigrams(int head, const Sentence& sentence) {
  const auto adj = adjacency(sentence);
  BigramCounts bag;
  for (auto [x, e1] : adj[static_cast<size_t>(head)]) {
    for (auto [y, e2] : adj[static_cast<size_t>(x)]) {
      if (e2 == e1 || y == head) continue;
      const Bigram bigram{sentence.edges[static_cast<size_t>(e1)].label,
                          sentence.edges[static_cast<size_t>(e2)].label};
      ++bag[bigram];
    }
  }
  return bag;
}

bool is_negated(int head, const Sentence& sentence) {
  const auto adj = adjacency(sentence);
  const auto dist = bfs_distances(adj, head);
  for (const DependencyEdge& e : sentence.edges) {
    if (e.label != "neg") continue;
    const int dh = dist[static_cast<size_t>(e.head)];
    const int dd = dist[static_cast<size_t>(e.dependent)];
    if ((dh != kUnreachable && dh <= 1) || (dd != kUnreachable && dd <= 1)) return true;
  }
  return false;
}

PairFeatureVector extract_pair_features(const MentionPair& pair, const Document& doc) {
  const EventMention& event = doc.events[static_cast<size_t>(pair.event_index)];
  const ContextMention& context = doc.contexts[static_cast<size_t>(pair.context_index)];
  const Sentence& evt_sent = doc.sentences[static_cast<size_t>(event.sentence)];
  const Sentence& ctx_sent = doc.sentences[static_cast<size_t>(context.sentence)];

  PairFeatureVector v;
  v.sentence_distance = sentence_distance(event, context);
  v.dependency_distance = dependency_distance(pair, doc, &v.warnings);
  v.context_type_frequency = context_type_frequency(pair, doc);
  v.is_context_closest = is_context_closest(pair, doc);
  v.evt_phi = phi_features(evt_sent);
  v.ctx_phi = phi_features(ctx_sent);

  const int evt_head = head_token(event.start, event.end, evt_sent);
  const int ctx_head = head_token(context.start, context.end, ctx_sent);
  v.evt_bigrams = spanning_bigrams(evt_head, evt_sent);
  v.ctx_bigrams = spanning_bigrams(ctx_head, ctx_sent);
  v.evt_negated = is_negated(evt_head, evt_sent);
  v.ctx_negated = is_negated(ctx_head, ctx_sent);
  return v;
}

FeatureVocabulary build_vocabulary(std::span<const Document> training_docs,
                                   CategoryFilter filter) {
  std::vector<const Document*> ptrs;
  ptrs.reserve(training_docs.size());
  for (const Document& doc : training_docs) ptrs.push_back(&doc);
  return build_vocabulary(ptrs, filter);
}

FeatureVocabulary build_vocabulary(const std::vector<const Document*>& training_docs,
                                   CategoryFilter filter) {
  std::set<Bigram> evt_set, ctx_set;
  for (const Document* doc_ptr : training_docs) {
    const Document& doc = *doc_ptr;
    for (const EventMention& e : doc.events) {
      const Sentence& s = doc.sentences[static_cast<size_t>(e.sentence)];
      for (const auto& [bigram, count] : spanning_bigrams(head_token(e.start, e.end, s), s)) {
        (void)count;
        evt_set.insert(bigram);
      }
    }
    for (const ContextMention& c : doc.contexts) {
      if (!category_allowed(c.category, filter)) continue;
      const Sentence& s = doc.sentences[static_cast<size_t>(c.sentence)];
      for (const auto& [bigram, count] : spanning_bigrams(head_token(c.start, c.end, s), s)) {
        (void)count;
        ctx_set.insert(bigram);
      }
    }
  }
  FeatureVocabulary vocab;
  int idx = 0;
  for (const Bigram& b : evt_set) vocab.event_bigrams[b] = idx++;
  idx = 0;
  for (const Bigram& b : ctx_set) vocab.context_bigrams[b] = idx++;
  return vocab;
}

std::string pair_features_to_jsonl(const PairFeatureVector& v) {
  const auto bag_to_json = [](const BigramCounts& bag) {
    nlohmann::json j = nlohmann::json::object();
    for (const auto& [bigram, count] : bag) j[bigram.first + "|" + bigram.second] = count;
    return j;
  };
  nlohmann::json j{{"sentence_distance", v.sentence_distance},
                   {"dependency_distance", v.dependency_distance},
                   {"context_type_frequency", v.context_type_frequency},
                   {"is_context_closest", v.is_context_closest ? 1 : 0},
                   {"evt_first_person", v.evt_phi.first_person ? 1 : 0},
                   {"evt_past_tense", v.evt_phi.past_tense ? 1 : 0},
                   {"evt_present_tense", v.evt_phi.present_tense ? 1 : 0},
                   {"ctx_first_person", v.ctx_phi.first_person ? 1 : 0},
                   {"ctx_past_tense", v.ctx_phi.past_tense ? 1 : 0},
                   {"ctx_present_tense", v.ctx_phi.present_tense ? 1 : 0},
                   {"evt_negated", v.evt_negated ? 1 : 0},
                   {"ctx_negated", v.ctx_negated ? 1 : 0},
                   {"evt_bigrams", bag_to_json(v.evt_bigrams)},
                   {"ctx_bigrams", bag_to_json(v.ctx_bigrams)}};
  return j.dump();
}

} // namespace ctxassoc
