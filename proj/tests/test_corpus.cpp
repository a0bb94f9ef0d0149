#include <doctest.h>

#include "ctxassoc/corpus.hpp"
#include "ctxassoc/synthetic.hpp"
#include "test_util.hpp"

using namespace ctxassoc;
using testutil::TempDir;

namespace {

Document tiny_document(const std::string& paper_id) {
  Document doc;
  doc.paper_id = paper_id;
  doc.sentences.push_back(testutil::flat_sentence(
      {{"Rac1", "NNP"}, {"activation", "NN"}, {"was", "VBD"}, {"observed", "VBN"}}));
  doc.sentences.push_back(testutil::flat_sentence(
      {{"in", "IN"}, {"T-cell", "NN"}, {"cultures", "NNS"}}));
  doc.events.push_back(EventMention{"E0", 0, 1, 2});
  doc.contexts.push_back(
      ContextMention{"C0", 1, 1, 2, "cellosaurus:CVCL_0001", ContextCategory::CellLine});
  doc.gold.push_back(GoldAssociation{"E0", "C0"});
  return doc;
}

} // namespace

TEST_CASE("load_corpus reads every paper file in a directory") {
  TempDir dir("corpus_load");
  Corpus written;
  for (int i = 0; i < 22; ++i) written.documents.push_back(tiny_document("P" + std::to_string(i)));
  save_corpus(written, dir.path());

  const Corpus corpus = load_corpus(dir.path());
  CHECK(corpus.documents.size() == 22);
}

TEST_CASE("load_corpus on an empty directory reports an empty corpus") {
  TempDir dir("corpus_empty");
  CHECK_THROWS_WITH_AS(load_corpus(dir.path()), doctest::Contains("empty corpus"),
                       ValidationError);
}

TEST_CASE("load_corpus rejects a degenerate event span, citing the id") {
  TempDir dir("corpus_span");
  Document doc = tiny_document("P1");
  doc.events[0].start = 2;
  doc.events[0].end = 2; // end <= start
  testutil::write_file(dir.path() / "P1.json", document_to_json(doc));
  CHECK_THROWS_WITH_AS(load_corpus(dir.path()), doctest::Contains("E0"), ValidationError);
}

TEST_CASE("load_corpus rejects missing paths with a parse error") {
  CHECK_THROWS_AS(load_corpus("/nonexistent/corpus/path"), ParseError);
}

TEST_CASE("load_corpus reports malformed JSON with the file name") {
  TempDir dir("corpus_parse");
  testutil::write_file(dir.path() / "bad.json", "{\"paper_id\": ");
  CHECK_THROWS_AS(load_corpus(dir.path()), ParseError);
}

TEST_CASE("validate_corpus warns on out-of-restriction categories, errors on dangling gold") {
  Corpus corpus;
  corpus.documents.push_back(tiny_document("P1"));

  SUBCASE("fully conformant corpus yields an empty report") {
    const ValidationReport report = validate_corpus(corpus);
    CHECK(report.errors.empty());
    CHECK(report.warnings.empty());
  }

  SUBCASE("Organ category is a warning, not an error") {
    corpus.documents[0].contexts.push_back(
        ContextMention{"C1", 0, 0, 1, "uberon:0002048", ContextCategory::Organ});
    const ValidationReport report = validate_corpus(corpus);
    CHECK(report.errors.empty());
    REQUIRE(report.warnings.size() == 1);
    CHECK(report.warnings[0].find("Organ") != std::string::npos);
  }

  SUBCASE("gold association with a missing event id is an error") {
    corpus.documents[0].gold.push_back(GoldAssociation{"E_missing", "C0"});
    const ValidationReport report = validate_corpus(corpus);
    REQUIRE(report.errors.size() == 1);
    CHECK(report.errors[0].find("E_missing") != std::string::npos);
  }

  SUBCASE("unknown POS tag is a warning") {
    corpus.documents[0].sentences[0].tokens[0].pos = "XYZ";
    const ValidationReport report = validate_corpus(corpus);
    CHECK(report.errors.empty());
    CHECK(report.warnings.size() == 1);
  }

  SUBCASE("duplicate edges are an error") {
    corpus.documents[0].sentences[0].edges.push_back(
        corpus.documents[0].sentences[0].edges[0]);
    CHECK_FALSE(validate_corpus(corpus).ok());
  }

  SUBCASE("out-of-range root is an error") {
    corpus.documents[0].sentences[0].root = 99;
    CHECK_FALSE(validate_corpus(corpus).ok());
  }

  SUBCASE("duplicate paper ids are an error") {
    corpus.documents.push_back(tiny_document("P1"));
    CHECK_FALSE(validate_corpus(corpus).ok());
  }
}

TEST_CASE("serialize then load is the identity on validated corpora") {
  // synthetic generator provides the random documents for the round trip
  SynthParams params;
  params.n_papers = 6;
  params.signal.noise = 0.1;
  const Corpus corpus = generate_synthetic_corpus(99, params);
  REQUIRE(validate_corpus(corpus).ok());

  TempDir dir("corpus_roundtrip");
  save_corpus(corpus, dir.path());
  const Corpus reloaded = load_corpus(dir.path());

  REQUIRE(reloaded.documents.size() == corpus.documents.size());
  for (size_t i = 0; i < corpus.documents.size(); ++i)
    CHECK(document_to_json(reloaded.documents[i]) == document_to_json(corpus.documents[i]));
}

TEST_CASE("synthetic corpus bytes are a pure function of the seed") {
  SynthParams params;
  params.n_papers = 3;
  const Corpus a = generate_synthetic_corpus(7, params);
  const Corpus b = generate_synthetic_corpus(7, params);
  REQUIRE(a.documents.size() == b.documents.size());
  for (size_t i = 0; i < a.documents.size(); ++i)
    CHECK(document_to_json(a.documents[i]) == document_to_json(b.documents[i]));

  const Corpus c = generate_synthetic_corpus(8, params);
  CHECK(document_to_json(a.documents[0]) != document_to_json(c.documents[0]));
}

TEST_CASE("annotation layout converter") {
  TempDir dir("convert");
  const auto paper = dir.path() / "PMC0001";
  std::filesystem::create_directories(paper);

  SUBCASE("clean layout converts") {
    testutil::write_file(paper / "sentences.tsv",
                         "Rac1\tNNP\nactivation\tNN\n\nT-cell\tNN\ncultures\tNNS\n");
    testutil::write_file(paper / "roots.tsv", "0\n0\n");
    testutil::write_file(paper / "dependencies.tsv", "0\t0\t1\tnsubj\n1\t0\t1\tdobj\n");
    testutil::write_file(paper / "events.tsv", "E0\t0\t0\t2\n");
    testutil::write_file(paper / "contexts.tsv",
                         "C0\t1\t0\t1\tcellosaurus:CVCL_0001\tCellLine\n");
    testutil::write_file(paper / "gold.tsv", "E0\tC0\n");

    ValidationReport report;
    const auto doc = convert_annotation_dir(paper, report);
    REQUIRE(report.errors.empty());
    REQUIRE(doc.has_value());
    CHECK(doc->paper_id == "PMC0001");
    CHECK(doc->sentences.size() == 2);
    CHECK(doc->events.size() == 1);
    CHECK(doc->contexts.size() == 1);
    CHECK(doc->gold.size() == 1);
  }

  SUBCASE("missing files are reported, not fabricated") {
    testutil::write_file(paper / "sentences.tsv", "Rac1\tNNP\n");
    ValidationReport report;
    const auto doc = convert_annotation_dir(paper, report);
    CHECK_FALSE(doc.has_value());
    CHECK(report.errors.size() >= 1);
  }

  SUBCASE("span discrepancies are reported, not silently fixed") {
    testutil::write_file(paper / "sentences.tsv", "Rac1\tNNP\n");
    testutil::write_file(paper / "roots.tsv", "0\n");
    testutil::write_file(paper / "dependencies.tsv", "");
    testutil::write_file(paper / "events.tsv", "E0\t0\t0\t5\n"); // span past sentence end
    testutil::write_file(paper / "contexts.tsv", "");
    testutil::write_file(paper / "gold.tsv", "");
    ValidationReport report;
    const auto doc = convert_annotation_dir(paper, report);
    CHECK_FALSE(doc.has_value());
    REQUIRE(report.errors.size() >= 1);
    CHECK(report.errors[0].find("E0") != std::string::npos);
  }
}
