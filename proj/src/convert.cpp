#include "ctxassoc/corpus.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <vector>

namespace ctxassoc {

namespace {

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, '\t')) out.push_back(field);
  return out;
}

bool parse_int(const std::string& s, int& out) {
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

struct LineReader {
  std::ifstream in;
  std::string file;
  int lineno = 0;

  LineReader(const std::filesystem::path& p) : in(p), file(p.filename().string()) {}

  bool next(std::string& line) {
    if (!std::getline(in, line)) return false;
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
  }

  std::string where() const { return file + ":" + std::to_string(lineno); }
};

} // namespace

// Expects a per-paper directory containing sentences.tsv, dependencies.tsv,
// roots.tsv, events.tsv, contexts.tsv and gold.tsv (layout documented in the
// README). Malformed rows are reported and the row skipped; structural
// problems surface through the final document validation.
std::optional<Document> convert_annotation_dir(const std::filesystem::path& dir,
                                               ValidationReport& report) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) {
    report.errors.push_back("not a directory: '" + dir.string() + "'");
    return std::nullopt;
  }
  Document doc;
  doc.paper_id = dir.filename().string();
  if (doc.paper_id.empty()) doc.paper_id = dir.parent_path().filename().string();

  const auto require = [&](const char* name) {
    fs::path p = dir / name;
    if (!fs::is_regular_file(p))
      report.errors.push_back(doc.paper_id + ": missing required file '" + std::string(name) + "'");
    return p;
  };

  const fs::path sentences_path = require("sentences.tsv");
  const fs::path deps_path = require("dependencies.tsv");
  const fs::path roots_path = require("roots.tsv");
  const fs::path events_path = require("events.tsv");
  const fs::path contexts_path = require("contexts.tsv");
  const fs::path gold_path = require("gold.tsv");
  if (!report.ok()) return std::nullopt;

  {
    LineReader r(sentences_path);
    Sentence current;
    std::string line;
    while (r.next(line)) {
      if (line.empty()) {
        if (!current.tokens.empty()) doc.sentences.push_back(std::move(current));
        current = Sentence{};
        continue;
      }
      auto fields = split_tabs(line);
      if (fields.size() != 2) {
        report.errors.push_back(r.where() + ": expected 'word<TAB>pos', got " +
                                std::to_string(fields.size()) + " field(s)");
        continue;
      }
      current.tokens.push_back(Token{fields[0], fields[1]});
    }
    if (!current.tokens.empty()) doc.sentences.push_back(std::move(current));
  }

  {
    LineReader r(roots_path);
    std::string line;
    size_t si = 0;
    while (r.next(line)) {
      if (line.empty()) continue;
      int root;
      if (!parse_int(line, root)) {
        report.errors.push_back(r.where() + ": root index is not an integer");
      } else if (si < doc.sentences.size()) {
        doc.sentences[si].root = root;
      }
      ++si;
    }
    if (si != doc.sentences.size())
      report.errors.push_back(doc.paper_id + ": roots.tsv has " + std::to_string(si) +
                              " entries for " + std::to_string(doc.sentences.size()) + " sentences");
  }

  {
    LineReader r(deps_path);
    std::string line;
    while (r.next(line)) {
      if (line.empty()) continue;
      auto fields = split_tabs(line);
      int si, head, dep;
      if (fields.size() != 4 || !parse_int(fields[0], si) || !parse_int(fields[1], head) ||
          !parse_int(fields[2], dep)) {
        report.errors.push_back(r.where() + ": expected 'sentence<TAB>head<TAB>dependent<TAB>label'");
        continue;
      }
      if (si < 0 || si >= static_cast<int>(doc.sentences.size())) {
        report.errors.push_back(r.where() + ": sentence index " + std::to_string(si) + " out of range");
        continue;
      }
      doc.sentences[static_cast<size_t>(si)].edges.push_back(DependencyEdge{head, dep, fields[3]});
    }
  }

  {
    LineReader r(events_path);
    std::string line;
    while (r.next(line)) {
      if (line.empty()) continue;
      auto fields = split_tabs(line);
      EventMention e;
      if (fields.size() != 4 || !parse_int(fields[1], e.sentence) ||
          !parse_int(fields[2], e.start) || !parse_int(fields[3], e.end)) {
        report.errors.push_back(r.where() + ": expected 'id<TAB>sentence<TAB>start<TAB>end'");
        continue;
      }
      e.id = fields[0];
      doc.events.push_back(std::move(e));
    }
  }

  {
    LineReader r(contexts_path);
    std::string line;
    while (r.next(line)) {
      if (line.empty()) continue;
      auto fields = split_tabs(line);
      ContextMention c;
      if (fields.size() != 6 || !parse_int(fields[1], c.sentence) ||
          !parse_int(fields[2], c.start) || !parse_int(fields[3], c.end)) {
        report.errors.push_back(r.where() +
                                ": expected 'id<TAB>sentence<TAB>start<TAB>end<TAB>grounding<TAB>category'");
        continue;
      }
      c.id = fields[0];
      c.grounding_id = fields[4];
      auto cat = parse_category(fields[5]);
      if (!cat) {
        report.errors.push_back(r.where() + ": unknown category '" + fields[5] + "'");
        continue;
      }
      c.category = *cat;
      doc.contexts.push_back(std::move(c));
    }
  }

  {
    LineReader r(gold_path);
    std::string line;
    while (r.next(line)) {
      if (line.empty()) continue;
      auto fields = split_tabs(line);
      if (fields.size() != 2) {
        report.errors.push_back(r.where() + ": expected 'event_id<TAB>context_mention_id'");
        continue;
      }
      doc.gold.push_back(GoldAssociation{fields[0], fields[1]});
    }
  }

  ValidationReport doc_report = validate_document(doc);
  report.errors.insert(report.errors.end(), doc_report.errors.begin(), doc_report.errors.end());
  report.warnings.insert(report.warnings.end(), doc_report.warnings.begin(), doc_report.warnings.end());
  if (!report.ok()) return std::nullopt;
  return doc;
}

} // namespace ctxassoc
