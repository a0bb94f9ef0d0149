#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ctxassoc {

// Annotated-document data model. Documents carry pre-parsed linguistic
// annotations (tokens, POS tags, dependency graphs) produced upstream;
// nothing here runs a tagger or parser.

struct Token {
  std::string word;
  std::string pos; // Penn Treebank tag
};

struct DependencyEdge {
  int head = 0;
  int dependent = 0;
  std::string label;

  friend bool operator==(const DependencyEdge&, const DependencyEdge&) = default;
};

struct Sentence {
  std::vector<Token> tokens;
  std::vector<DependencyEdge> edges;
  int root = 0;
};

// Half-open token interval [start, end) within one sentence.
struct EventMention {
  std::string id;
  int sentence = 0;
  int start = 0;
  int end = 0;
};

enum class ContextCategory { Species, Organ, TissueType, CellLine, CellularComponent };

std::string to_string(ContextCategory c);
std::optional<ContextCategory> parse_category(const std::string& s);

struct ContextMention {
  std::string id;
  int sentence = 0;
  int start = 0;
  int end = 0;
  std::string grounding_id;
  ContextCategory category = ContextCategory::Species;
};

struct GoldAssociation {
  std::string event_id;
  std::string context_mention_id;
};

struct Document {
  std::string paper_id;
  std::vector<Sentence> sentences;
  std::vector<EventMention> events;
  std::vector<ContextMention> contexts;
  std::vector<GoldAssociation> gold;

  const EventMention* find_event(const std::string& id) const;
  const ContextMention* find_context(const std::string& id) const;
};

struct Corpus {
  std::vector<Document> documents;
};

struct ValidationReport {
  std::vector<std::string> errors;
  std::vector<std::string> warnings;

  bool ok() const { return errors.empty(); }
};

class CorpusError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class ParseError : public CorpusError {
public:
  using CorpusError::CorpusError;
};

class ValidationError : public CorpusError {
public:
  using CorpusError::CorpusError;
};

// Loads a single paper file or a directory of paper files (*.json, sorted by
// filename) and validates every structural invariant. Throws ParseError on
// malformed input and ValidationError on invariant violations.
Corpus load_corpus(const std::filesystem::path& path);

// Structural errors plus advisory warnings (unknown POS tags, categories
// outside the restricted {Species, TissueType, CellLine} set).
ValidationReport validate_corpus(const Corpus& corpus);
ValidationReport validate_document(const Document& doc);

std::string document_to_json(const Document& doc);
Document document_from_json(const std::string& text, const std::string& source_name);

// One JSON file per paper, named <paper_id>.json.
void save_corpus(const Corpus& corpus, const std::filesystem::path& dir);

// Converter for the tab-separated annotation layout described in the README.
// Discrepancies are collected into `report`; the document is returned only
// when the layout converted cleanly.
std::optional<Document> convert_annotation_dir(const std::filesystem::path& dir,
                                               ValidationReport& report);

} // namespace ctxassoc
