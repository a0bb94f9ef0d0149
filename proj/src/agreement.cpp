#include "ctxassoc/agreement.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <set>

#include <json.hpp>

namespace ctxassoc {

std::optional<double> fleiss_kappa(const RatingTable& table) {
  const int n = table.items();
  const int r = table.raters();
  if (n < 1 || r < 2)
    throw std::invalid_argument("fleiss_kappa: need >= 1 item and >= 2 raters");

  double p_yes = 0.0; // share of all ratings in the "associated" category
  double mean_item_agreement = 0.0;
  for (const auto& row : table.judgments) {
    if (static_cast<int>(row.size()) != r)
      throw std::invalid_argument("fleiss_kappa: ragged rating table");
    int yes = 0;
    for (bool b : row)
      if (b) ++yes;
    const int no = r - yes;
    p_yes += yes;
    mean_item_agreement += (static_cast<double>(yes) * (yes - 1) +
                            static_cast<double>(no) * (no - 1)) /
                           (static_cast<double>(r) * (r - 1));
  }
  p_yes /= static_cast<double>(n) * r;
  mean_item_agreement /= n;

  const double expected = p_yes * p_yes + (1.0 - p_yes) * (1.0 - p_yes);
  if (expected >= 1.0) return std::nullopt; // single-category table: 0/0
  return (mean_item_agreement - expected) / (1.0 - expected);
}

namespace {

bool spans_overlap(const SpanRef& a, const SpanRef& b) {
  return a.sentence == b.sentence && a.start < b.end && b.start < a.end;
}

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(static_cast<size_t>(n)) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  int find(int x) {
    while (parent[static_cast<size_t>(x)] != x) {
      parent[static_cast<size_t>(x)] = parent[static_cast<size_t>(parent[static_cast<size_t>(x)])];
      x = parent[static_cast<size_t>(x)];
    }
    return x;
  }
  void merge(int a, int b) { parent[static_cast<size_t>(find(a))] = find(b); }
};

} // namespace

OverlapCounts span_overlap(const std::vector<SpanRef>& set_a, const std::vector<SpanRef>& set_b) {
  const int na = static_cast<int>(set_a.size());
  const int nb = static_cast<int>(set_b.size());
  UnionFind uf(na + nb);
  for (int i = 0; i < na; ++i)
    for (int j = 0; j < nb; ++j)
      if (spans_overlap(set_a[static_cast<size_t>(i)], set_b[static_cast<size_t>(j)]))
        uf.merge(i, na + j);

  std::map<int, std::pair<bool, bool>> components; // root -> (has A member, has B member)
  for (int i = 0; i < na; ++i) components[uf.find(i)].first = true;
  for (int j = 0; j < nb; ++j) components[uf.find(na + j)].second = true;

  OverlapCounts counts;
  for (const auto& [root, has] : components) {
    if (has.first && has.second) ++counts.both;
    else if (has.first) ++counts.only_a;
    else ++counts.only_b;
  }
  const long total = counts.both + counts.only_a + counts.only_b;
  counts.jaccard = total > 0 ? static_cast<double>(counts.both) / static_cast<double>(total) : 0.0;
  return counts;
}

AnnotatorJudgments load_annotator_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw AgreementError("cannot open annotator file '" + path.string() + "'");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw AgreementError(path.string() + ": " + e.what());
  }
  AnnotatorJudgments out;
  for (const auto& [paper_id, events] : j.items()) {
    for (const auto& [event_id, groundings] : events.items()) {
      std::vector<std::string>& list = out[paper_id][event_id];
      for (const auto& g : groundings) list.push_back(g.get<std::string>());
    }
  }
  return out;
}

AgreementReport kappa_report(const std::vector<AnnotatorJudgments>& annotators,
                             const Corpus& corpus, ItemUniverse universe) {
  if (annotators.size() < 2)
    throw AgreementError("kappa_report: need >= 2 annotators, got " +
                         std::to_string(annotators.size()));

  // papers shared by every annotator
  std::set<std::string> shared;
  for (const auto& [pid, events] : annotators.front()) shared.insert(pid);
  for (size_t a = 1; a < annotators.size(); ++a) {
    std::set<std::string> keep;
    for (const auto& [pid, events] : annotators[a])
      if (shared.count(pid)) keep.insert(pid);
    shared = std::move(keep);
  }
  if (shared.empty())
    throw AgreementError("kappa_report: annotator files cover disjoint paper sets");

  AgreementReport report;
  report.shared_papers.assign(shared.begin(), shared.end());

  // context types present in the shared papers, from the corpus mention sets
  std::set<std::string> types;
  std::map<std::string, const Document*> docs;
  for (const Document& doc : corpus.documents) {
    if (!shared.count(doc.paper_id)) continue;
    docs[doc.paper_id] = &doc;
    for (const ContextMention& c : doc.contexts) types.insert(c.grounding_id);
  }

  const auto judged = [](const AnnotatorJudgments& ann, const std::string& pid,
                         const std::string& event_id, const std::string& type) {
    auto pit = ann.find(pid);
    if (pit == ann.end()) return false;
    auto eit = pit->second.find(event_id);
    if (eit == pit->second.end()) return false;
    return std::find(eit->second.begin(), eit->second.end(), type) != eit->second.end();
  };

  for (const std::string& type : types) {
    RatingTable table;
    long associated_events = 0;
    for (const std::string& pid : report.shared_papers) {
      auto dit = docs.find(pid);
      if (dit == docs.end()) continue;
      // restrict to papers that actually mention the type
      bool mentioned = false;
      for (const ContextMention& c : dit->second->contexts)
        if (c.grounding_id == type) mentioned = true;
      if (!mentioned) continue;
      for (const EventMention& e : dit->second->events) {
        std::vector<bool> row;
        row.reserve(annotators.size());
        bool any = false;
        for (const AnnotatorJudgments& ann : annotators) {
          const bool yes = judged(ann, pid, e.id, type);
          row.push_back(yes);
          any = any || yes;
        }
        if (universe == ItemUniverse::ProposedEvents && !any) continue;
        if (any) ++associated_events;
        table.judgments.push_back(std::move(row));
      }
    }
    if (table.items() == 0) continue;
    TypeAgreement agreement;
    agreement.kappa = fleiss_kappa(table);
    agreement.association_count = associated_events;
    report.per_type[type] = agreement;
  }
  return report;
}

void write_agreement_files(const AgreementReport& report, const std::filesystem::path& dir,
                           int top_k) {
  std::filesystem::create_directories(dir);
  const auto fmt = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return std::string(buf);
  };
  {
    std::ofstream out(dir / "kappa.csv");
    out << "context_type,kappa,association_count\n";
    for (const auto& [type, agreement] : report.per_type)
      out << type << ","
          << (agreement.kappa ? fmt(*agreement.kappa) : std::string("undefined")) << ","
          << agreement.association_count << "\n";
  }
  {
    // kappa distribution binned in steps of 0.2 over [-1, 1]
    std::ofstream out(dir / "kappa_bins.csv");
    out << "bin_low,bin_high,types,associations\n";
    for (int b = 0; b < 10; ++b) {
      const double lo = -1.0 + 0.2 * b;
      const double hi = lo + 0.2;
      int types = 0;
      long associations = 0;
      for (const auto& [type, agreement] : report.per_type) {
        if (!agreement.kappa) continue;
        const double k = *agreement.kappa;
        if ((k >= lo && k < hi) || (b == 9 && k == hi)) {
          ++types;
          associations += agreement.association_count;
        }
      }
      out << fmt(lo) << "," << fmt(hi) << "," << types << "," << associations << "\n";
    }
  }
  {
    std::vector<std::pair<std::string, TypeAgreement>> ranked(report.per_type.begin(),
                                                              report.per_type.end());
    std::stable_sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
      return a.second.association_count > b.second.association_count;
    });
    std::ofstream out(dir / "top_contexts.csv");
    out << "rank,context_type,kappa,association_count\n";
    for (size_t i = 0; i < ranked.size() && i < static_cast<size_t>(top_k); ++i)
      out << (i + 1) << "," << ranked[i].first << ","
          << (ranked[i].second.kappa ? fmt(*ranked[i].second.kappa) : std::string("undefined"))
          << "," << ranked[i].second.association_count << "\n";
  }
}

} // namespace ctxassoc
