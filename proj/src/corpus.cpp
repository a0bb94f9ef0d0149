#include "ctxassoc/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

namespace ctxassoc {

using nlohmann::json;

namespace {

const std::unordered_set<std::string>& penn_tags() {
  static const std::unordered_set<std::string> tags = {
      "CC", "CD",  "DT",   "EX",  "FW",  "IN",  "JJ",  "JJR", "JJS", "LS",
      "MD", "NN",  "NNS",  "NNP", "NNPS", "PDT", "POS", "PRP", "PRP$", "RB",
      "RBR", "RBS", "RP",  "SYM", "TO",  "UH",  "VB",  "VBD", "VBG", "VBN",
      "VBP", "VBZ", "WDT", "WP",  "WP$", "WRB",
      // punctuation tags emitted by common tokenizers
      ".", ",", ":", "``", "''", "(", ")", "$", "#", "-LRB-", "-RRB-", "HYPH"};
  return tags;
}

std::string fmt(const std::string& doc, const std::string& msg) {
  return "[" + doc + "] " + msg;
}

void check_span(const std::string& doc, const std::string& kind,
                const std::string& id, int sentence, int start, int end,
                const std::vector<Sentence>& sentences,
                std::vector<std::string>& errors) {
  if (sentence < 0 || sentence >= static_cast<int>(sentences.size())) {
    errors.push_back(fmt(doc, kind + " '" + id + "' references sentence " +
                                  std::to_string(sentence) + " out of range"));
    return;
  }
  const int n = static_cast<int>(sentences[static_cast<size_t>(sentence)].tokens.size());
  if (start < 0 || end > n || start >= end) {
    errors.push_back(fmt(doc, kind + " '" + id + "' has invalid span [" +
                                  std::to_string(start) + ", " +
                                  std::to_string(end) + ") in sentence of " +
                                  std::to_string(n) + " tokens"));
  }
}

void validate_into(const Document& doc, ValidationReport& report) {
  const std::string& pid = doc.paper_id.empty() ? std::string("<unnamed>") : doc.paper_id;
  if (doc.paper_id.empty())
    report.errors.push_back(fmt(pid, "empty paper_id"));

  for (size_t si = 0; si < doc.sentences.size(); ++si) {
    const Sentence& s = doc.sentences[si];
    const std::string where = "sentence " + std::to_string(si);
    const int n = static_cast<int>(s.tokens.size());
    if (n == 0) {
      report.errors.push_back(fmt(pid, where + " has no tokens"));
      continue;
    }
    for (int ti = 0; ti < n; ++ti) {
      const Token& t = s.tokens[static_cast<size_t>(ti)];
      if (t.word.empty())
        report.errors.push_back(fmt(pid, where + " token " + std::to_string(ti) + " has empty word"));
      if (t.pos.empty())
        report.errors.push_back(fmt(pid, where + " token " + std::to_string(ti) + " has empty POS tag"));
      else if (!penn_tags().count(t.pos))
        report.warnings.push_back(fmt(pid, where + " token '" + t.word +
                                               "' has unknown POS tag '" + t.pos + "'"));
    }
    if (s.root < 0 || s.root >= n)
      report.errors.push_back(fmt(pid, where + " root index " + std::to_string(s.root) + " out of range"));
    std::set<std::pair<std::pair<int, int>, std::string>> seen;
    for (const DependencyEdge& e : s.edges) {
      if (e.head == e.dependent)
        report.errors.push_back(fmt(pid, where + " has self-loop edge at token " + std::to_string(e.head)));
      if (e.head < 0 || e.head >= n || e.dependent < 0 || e.dependent >= n)
        report.errors.push_back(fmt(pid, where + " edge (" + std::to_string(e.head) + " -> " +
                                             std::to_string(e.dependent) + ") index out of range"));
      else if (!seen.insert({{e.head, e.dependent}, e.label}).second)
        report.errors.push_back(fmt(pid, where + " duplicate edge (" + std::to_string(e.head) +
                                             " -> " + std::to_string(e.dependent) + ", " + e.label + ")"));
    }
  }

  std::set<std::string> event_ids;
  for (const EventMention& e : doc.events) {
    if (e.id.empty())
      report.errors.push_back(fmt(pid, "event with empty id"));
    else if (!event_ids.insert(e.id).second)
      report.errors.push_back(fmt(pid, "duplicate event id '" + e.id + "'"));
    check_span(pid, "event", e.id, e.sentence, e.start, e.end, doc.sentences, report.errors);
  }

  std::set<std::string> context_ids;
  for (const ContextMention& c : doc.contexts) {
    if (c.id.empty())
      report.errors.push_back(fmt(pid, "context mention with empty id"));
    else if (!context_ids.insert(c.id).second)
      report.errors.push_back(fmt(pid, "duplicate context mention id '" + c.id + "'"));
    check_span(pid, "context mention", c.id, c.sentence, c.start, c.end, doc.sentences, report.errors);
    if (c.grounding_id.empty())
      report.errors.push_back(fmt(pid, "context mention '" + c.id + "' has empty grounding_id"));
    if (c.category != ContextCategory::Species && c.category != ContextCategory::TissueType &&
        c.category != ContextCategory::CellLine)
      report.warnings.push_back(fmt(pid, "context mention '" + c.id + "' has category '" +
                                             to_string(c.category) +
                                             "' outside the restricted set"));
  }

  for (const GoldAssociation& g : doc.gold) {
    if (!event_ids.count(g.event_id))
      report.errors.push_back(fmt(pid, "gold association references missing event id '" + g.event_id + "'"));
    if (!context_ids.count(g.context_mention_id))
      report.errors.push_back(fmt(pid, "gold association references missing context mention id '" +
                                           g.context_mention_id + "'"));
  }
}

json token_to_json(const Token& t) { return json{{"word", t.word}, {"pos", t.pos}}; }

json sentence_to_json(const Sentence& s) {
  json tokens = json::array();
  for (const Token& t : s.tokens) tokens.push_back(token_to_json(t));
  json edges = json::array();
  for (const DependencyEdge& e : s.edges)
    edges.push_back({{"head", e.head}, {"dependent", e.dependent}, {"label", e.label}});
  return json{{"tokens", tokens}, {"edges", edges}, {"root", s.root}};
}

json document_to_json_obj(const Document& doc) {
  json sentences = json::array();
  for (const Sentence& s : doc.sentences) sentences.push_back(sentence_to_json(s));
  json events = json::array();
  for (const EventMention& e : doc.events)
    events.push_back({{"id", e.id}, {"sentence", e.sentence}, {"start", e.start}, {"end", e.end}});
  json contexts = json::array();
  for (const ContextMention& c : doc.contexts)
    contexts.push_back({{"id", c.id},
                        {"sentence", c.sentence},
                        {"start", c.start},
                        {"end", c.end},
                        {"grounding_id", c.grounding_id},
                        {"category", to_string(c.category)}});
  json gold = json::array();
  for (const GoldAssociation& g : doc.gold)
    gold.push_back({{"event_id", g.event_id}, {"context_mention_id", g.context_mention_id}});
  return json{{"paper_id", doc.paper_id},
              {"sentences", sentences},
              {"events", events},
              {"contexts", contexts},
              {"gold", gold}};
}

template <typename T>
T get_field(const json& j, const char* key, const std::string& where) {
  auto it = j.find(key);
  if (it == j.end())
    throw ParseError(where + ": missing field '" + key + "'");
  try {
    return it->get<T>();
  } catch (const json::exception& e) {
    throw ParseError(where + ": field '" + key + "': " + e.what());
  }
}

Document document_from_json_obj(const json& j, const std::string& source) {
  if (!j.is_object()) throw ParseError(source + ": top-level value is not an object");
  Document doc;
  doc.paper_id = get_field<std::string>(j, "paper_id", source);
  const std::string where = source + " (" + doc.paper_id + ")";

  for (const json& sj : get_field<json>(j, "sentences", where)) {
    Sentence s;
    for (const json& tj : get_field<json>(sj, "tokens", where)) {
      Token t;
      t.word = get_field<std::string>(tj, "word", where);
      t.pos = get_field<std::string>(tj, "pos", where);
      s.tokens.push_back(std::move(t));
    }
    for (const json& ej : get_field<json>(sj, "edges", where)) {
      DependencyEdge e;
      e.head = get_field<int>(ej, "head", where);
      e.dependent = get_field<int>(ej, "dependent", where);
      e.label = get_field<std::string>(ej, "label", where);
      s.edges.push_back(std::move(e));
    }
    s.root = get_field<int>(sj, "root", where);
    doc.sentences.push_back(std::move(s));
  }
  for (const json& ej : get_field<json>(j, "events", where)) {
    EventMention e;
    e.id = get_field<std::string>(ej, "id", where);
    e.sentence = get_field<int>(ej, "sentence", where);
    e.start = get_field<int>(ej, "start", where);
    e.end = get_field<int>(ej, "end", where);
    doc.events.push_back(std::move(e));
  }
  for (const json& cj : get_field<json>(j, "contexts", where)) {
    ContextMention c;
    c.id = get_field<std::string>(cj, "id", where);
    c.sentence = get_field<int>(cj, "sentence", where);
    c.start = get_field<int>(cj, "start", where);
    c.end = get_field<int>(cj, "end", where);
    c.grounding_id = get_field<std::string>(cj, "grounding_id", where);
    const std::string cat = get_field<std::string>(cj, "category", where);
    auto parsed = parse_category(cat);
    if (!parsed)
      throw ParseError(where + ": context mention '" + c.id + "' has unknown category '" + cat + "'");
    c.category = *parsed;
    doc.contexts.push_back(std::move(c));
  }
  for (const json& gj : get_field<json>(j, "gold", where)) {
    GoldAssociation g;
    g.event_id = get_field<std::string>(gj, "event_id", where);
    g.context_mention_id = get_field<std::string>(gj, "context_mention_id", where);
    doc.gold.push_back(std::move(g));
  }
  return doc;
}

Document load_document_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in)
    throw ParseError("cannot open '" + path.string() + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
  return document_from_json_obj(j, path.filename().string());
}

} // namespace

std::string to_string(ContextCategory c) {
  switch (c) {
    case ContextCategory::Species: return "Species";
    case ContextCategory::Organ: return "Organ";
    case ContextCategory::TissueType: return "TissueType";
    case ContextCategory::CellLine: return "CellLine";
    case ContextCategory::CellularComponent: return "CellularComponent";
  }
  return "Species";
}

std::optional<ContextCategory> parse_category(const std::string& s) {
  if (s == "Species") return ContextCategory::Species;
  if (s == "Organ") return ContextCategory::Organ;
  if (s == "TissueType") return ContextCategory::TissueType;
  if (s == "CellLine") return ContextCategory::CellLine;
  if (s == "CellularComponent") return ContextCategory::CellularComponent;
  return std::nullopt;
}

const EventMention* Document::find_event(const std::string& id) const {
  for (const EventMention& e : events)
    if (e.id == id) return &e;
  return nullptr;
}

const ContextMention* Document::find_context(const std::string& id) const {
  for (const ContextMention& c : contexts)
    if (c.id == id) return &c;
  return nullptr;
}

ValidationReport validate_document(const Document& doc) {
  ValidationReport report;
  validate_into(doc, report);
  return report;
}

ValidationReport validate_corpus(const Corpus& corpus) {
  ValidationReport report;
  if (corpus.documents.empty())
    report.errors.push_back("empty corpus");
  std::set<std::string> ids;
  for (const Document& doc : corpus.documents) {
    if (!ids.insert(doc.paper_id).second)
      report.errors.push_back("duplicate paper_id '" + doc.paper_id + "'");
    validate_into(doc, report);
  }
  return report;
}

Corpus load_corpus(const std::filesystem::path& path) {
  namespace fs = std::filesystem;
  Corpus corpus;
  if (fs::is_directory(path)) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(path))
      if (entry.is_regular_file() && entry.path().extension() == ".json")
        files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    for (const fs::path& f : files)
      corpus.documents.push_back(load_document_file(f));
  } else if (fs::is_regular_file(path)) {
    corpus.documents.push_back(load_document_file(path));
  } else {
    throw ParseError("no such file or directory: '" + path.string() + "'");
  }

  ValidationReport report = validate_corpus(corpus);
  if (!report.ok()) {
    std::ostringstream msg;
    msg << "corpus validation failed with " << report.errors.size() << " error(s):";
    for (const std::string& e : report.errors) msg << "\n  " << e;
    throw ValidationError(msg.str());
  }
  return corpus;
}

std::string document_to_json(const Document& doc) {
  return document_to_json_obj(doc).dump(2) + "\n";
}

Document document_from_json(const std::string& text, const std::string& source_name) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(source_name + ": " + e.what());
  }
  return document_from_json_obj(j, source_name);
}

void save_corpus(const Corpus& corpus, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  for (const Document& doc : corpus.documents) {
    std::ofstream out(dir / (doc.paper_id + ".json"));
    if (!out)
      throw CorpusError("cannot write corpus file for '" + doc.paper_id + "'");
    out << document_to_json(doc);
  }
}

} // namespace ctxassoc
