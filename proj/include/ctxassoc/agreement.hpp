#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ctxassoc/corpus.hpp"

namespace ctxassoc {

// items x raters binary judgments for one context type.
struct RatingTable {
  std::vector<std::vector<bool>> judgments; // judgments[item][rater]

  int items() const { return static_cast<int>(judgments.size()); }
  int raters() const { return judgments.empty() ? 0 : static_cast<int>(judgments.front().size()); }
};

// Fleiss' kappa over the two categories; nullopt when expected agreement is 1
// (all ratings in a single category), which leaves kappa undefined.
std::optional<double> fleiss_kappa(const RatingTable& table);

struct SpanRef {
  int sentence = 0;
  int start = 0;
  int end = 0; // half-open
};

struct OverlapCounts {
  long both = 0;
  long only_a = 0;
  long only_b = 0;
  double jaccard = 0.0;
};

// Spans sharing >= 1 token position count as shared items; chains of
// cross-set overlaps are merged (connected components) so each counts once.
OverlapCounts span_overlap(const std::vector<SpanRef>& set_a, const std::vector<SpanRef>& set_b);

// paper_id -> event_id -> associated grounding ids, one map per annotator.
using AnnotatorJudgments = std::map<std::string, std::map<std::string, std::vector<std::string>>>;

AnnotatorJudgments load_annotator_file(const std::filesystem::path& path);

enum class ItemUniverse {
  AllEvents,      // every event in the shared papers rates every context type
  ProposedEvents, // only events where >= 1 annotator proposed the type
};

struct TypeAgreement {
  std::optional<double> kappa;
  long association_count = 0; // events associated with the type by >= 1 annotator
};

struct AgreementReport {
  std::map<std::string, TypeAgreement> per_type; // keyed by grounding id
  std::vector<std::string> shared_papers;
};

class AgreementError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Computes one kappa per context type over the papers shared by all
// annotators; throws AgreementError when fewer than two annotators or no
// shared papers exist.
AgreementReport kappa_report(const std::vector<AnnotatorJudgments>& annotators,
                             const Corpus& corpus,
                             ItemUniverse universe = ItemUniverse::AllEvents);

// kappa.csv plus the binned summary and top-k tables; overlap.json comes from
// span_overlap.
void write_agreement_files(const AgreementReport& report, const std::filesystem::path& dir,
                           int top_k = 15);

} // namespace ctxassoc
