#include "ctxassoc/eval.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cstdio>
#include <fstream>
#include <functional>
#include <mutex>
#include <stdexcept>
#include <thread>
#include <tuple>

#include <json.hpp>

#include "ctxassoc/aggregate.hpp"
#include "ctxassoc/features.hpp"
#include "ctxassoc/instances.hpp"
#include "ctxassoc/rng.hpp"

namespace ctxassoc {

namespace {

constexpr std::uint16_t kFullSubset = 0x3FFF;

void parallel_for(std::size_t task_count, int workers, const std::function<void(std::size_t)>& fn) {
  if (workers <= 1 || task_count <= 1) {
    for (std::size_t i = 0; i < task_count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  const int n = std::min<int>(workers, static_cast<int>(task_count));
  pool.reserve(static_cast<size_t>(n));
  std::exception_ptr error;
  std::mutex error_mutex;
  for (int w = 0; w < n; ++w) {
    pool.emplace_back([&]() {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= task_count) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
          return;
        }
      }
    });
  }
  for (std::thread& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

struct DocCache {
  const Document* doc = nullptr;
  std::vector<TypeLevelCandidate> candidates;
  std::vector<std::vector<PairFeatureVector>> pair_features; // per candidate
  std::vector<int> min_sentence_distance;                    // per candidate
};

using PairCache = std::map<std::string, DocCache>;

PairCache build_pair_cache(const Corpus& corpus, CategoryFilter filter, int workers) {
  PairCache cache;
  for (const Document& doc : corpus.documents) cache[doc.paper_id].doc = &doc;
  std::vector<DocCache*> slots;
  slots.reserve(cache.size());
  for (auto& [id, slot] : cache) slots.push_back(&slot);

  parallel_for(slots.size(), workers, [&](std::size_t i) {
    DocCache& slot = *slots[i];
    const Document& doc = *slot.doc;
    slot.candidates = build_candidates(doc, filter);
    slot.pair_features.reserve(slot.candidates.size());
    slot.min_sentence_distance.reserve(slot.candidates.size());
    for (const TypeLevelCandidate& cand : slot.candidates) {
      std::vector<PairFeatureVector> features;
      features.reserve(cand.pairs.size());
      for (const MentionPair& pair : cand.pairs)
        features.push_back(extract_pair_features(pair, doc));
      slot.pair_features.push_back(std::move(features));
      slot.min_sentence_distance.push_back(candidate_min_sentence_distance(cand, doc));
    }
  });
  return cache;
}

struct SplitData {
  std::vector<AggregatedInstance> instances; // unstandardized, sorted by instance key
  std::vector<bool> labels;
  std::vector<int> min_sentence_distance;
  std::vector<std::string> keys; // "event_id|grounding_id"
};

struct FoldData {
  FoldSpec spec;
  std::vector<FeatureGroup> groups;
  SplitData train;
  SplitData validation;
  SplitData test;
};

SplitData build_split(const std::vector<std::string>& papers, const PairCache& cache,
                      const FeatureVocabulary& vocab) {
  struct Row {
    AggregatedInstance instance;
    int min_dist;
  };
  std::vector<Row> rows;
  for (const std::string& pid : papers) {
    const DocCache& slot = cache.at(pid);
    for (size_t ci = 0; ci < slot.candidates.size(); ++ci) {
      const TypeLevelCandidate& cand = slot.candidates[ci];
      std::vector<Vector> vectors;
      vectors.reserve(slot.pair_features[ci].size());
      for (const PairFeatureVector& pf : slot.pair_features[ci])
        vectors.push_back(densify(pf, vocab));
      rows.push_back(Row{aggregate(cand, vectors), slot.min_sentence_distance[ci]});
    }
  }
  std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
    return std::tie(a.instance.paper_id, a.instance.event_id, a.instance.grounding_id) <
           std::tie(b.instance.paper_id, b.instance.event_id, b.instance.grounding_id);
  });

  SplitData split;
  split.instances.reserve(rows.size());
  for (Row& row : rows) {
    split.labels.push_back(row.instance.label);
    split.min_sentence_distance.push_back(row.min_dist);
    split.keys.push_back(row.instance.event_id + "|" + row.instance.grounding_id);
    split.instances.push_back(std::move(row.instance));
  }
  return split;
}

FoldData prepare_fold(const PairCache& cache, const FoldSpec& spec, CategoryFilter filter) {
  std::vector<const Document*> training_docs;
  training_docs.reserve(spec.training_papers.size());
  for (const std::string& pid : spec.training_papers)
    training_docs.push_back(cache.at(pid).doc);
  const FeatureVocabulary vocab = build_vocabulary(training_docs, filter);

  FoldData fold;
  fold.spec = spec;
  fold.groups = column_groups(vocab);
  fold.train = build_split(spec.training_papers, cache, vocab);
  fold.validation = build_split(spec.validation_papers, cache, vocab);
  fold.test = build_split({spec.test_paper}, cache, vocab);
  return fold;
}

std::uint64_t task_seed(const FoldSpec& spec, std::uint16_t subset, ModelKind kind) {
  return mix_seed(mix_seed(spec.seed, subset), static_cast<std::uint64_t>(kind));
}

std::vector<AggregatedInstance> mask_split(const std::vector<AggregatedInstance>& instances,
                                           std::uint16_t subset,
                                           const std::vector<FeatureGroup>& groups) {
  std::vector<AggregatedInstance> out;
  out.reserve(instances.size());
  for (const AggregatedInstance& inst : instances) {
    AggregatedInstance masked = inst;
    masked.vector = mask_features(inst.vector, subset, groups);
    out.push_back(std::move(masked));
  }
  return out;
}

TrainedModel train_subset_model(const FoldData& fold, ModelKind kind, std::uint16_t subset,
                                const TrainConfig& base) {
  TrainConfig config = base;
  config.kind = kind;
  config.rng_seed = task_seed(fold.spec, subset, kind);
  const auto masked_train = mask_split(fold.train.instances, subset, fold.groups);
  return train(config, masked_train, subset);
}

constexpr double kSkippedSubset = -1.0;

// Validation F1 for one (model kind, subset) task; kSkippedSubset on training error.
double evaluate_subset(const FoldData& fold, ModelKind kind, std::uint16_t subset,
                       const TrainConfig& base, std::string* error) {
  try {
    const TrainedModel model = train_subset_model(fold, kind, subset, base);
    std::vector<bool> preds;
    preds.reserve(fold.validation.instances.size());
    for (const AggregatedInstance& inst : fold.validation.instances)
      preds.push_back(predict(model, mask_features(inst.vector, subset, fold.groups)).label);
    return micro_metrics(preds, fold.validation.labels).f1;
  } catch (const TrainingError& e) {
    if (error) *error = e.what();
    return kSkippedSubset;
  }
}

// smaller is better on ties: higher F1, then fewer groups, then earlier mask
bool subset_beats(double f1_a, std::uint16_t a, double f1_b, std::uint16_t b) {
  if (f1_a != f1_b) return f1_a > f1_b;
  const int pa = std::popcount(a), pb = std::popcount(b);
  if (pa != pb) return pa < pb;
  return a < b;
}

FoldResult finish_fold(const FoldData& fold, const std::vector<std::uint16_t>& subsets,
                       const std::vector<std::vector<double>>& scores_per_kind,
                       const EvalConfig& config,
                       const std::vector<std::vector<std::string>>& errors_per_kind) {
  FoldResult result;
  result.spec = fold.spec;
  result.test_gold = fold.test.labels;
  result.test_keys = fold.test.keys;

  for (size_t ki = 0; ki < config.models.size(); ++ki) {
    const ModelKind kind = config.models[ki];
    const std::vector<double>& scores = scores_per_kind[ki];
    for (const std::string& e : errors_per_kind[ki]) result.warnings.push_back(e);

    int best = -1;
    for (size_t si = 0; si < subsets.size(); ++si) {
      if (scores[si] == kSkippedSubset) continue;
      if (best < 0 || subset_beats(scores[si], subsets[si], scores[static_cast<size_t>(best)],
                                   subsets[static_cast<size_t>(best)]))
        best = static_cast<int>(si);
    }
    if (best < 0)
      throw TrainingError("fold '" + fold.spec.test_paper + "': every subset failed for " +
                          model_kind_name(kind));

    ModelOutcome outcome;
    outcome.subset = subsets[static_cast<size_t>(best)];
    outcome.validation_f1 = scores[static_cast<size_t>(best)];
    const TrainedModel model = train_subset_model(fold, kind, outcome.subset, config.train);
    outcome.test_predictions.reserve(fold.test.instances.size());
    for (const AggregatedInstance& inst : fold.test.instances)
      outcome.test_predictions.push_back(
          predict(model, mask_features(inst.vector, outcome.subset, fold.groups)).label);
    outcome.test = micro_metrics(outcome.test_predictions, fold.test.labels);
    result.models[kind] = std::move(outcome);
  }

  // baseline k searched on the validation split in the same loop
  {
    int best_k = 0;
    double best_f1 = -1.0;
    for (int k = 0; k <= kBaselineMaxK; ++k) {
      std::vector<bool> preds;
      preds.reserve(fold.validation.min_sentence_distance.size());
      for (int dist : fold.validation.min_sentence_distance) preds.push_back(dist <= k);
      const double f1 = micro_metrics(preds, fold.validation.labels).f1;
      if (f1 > best_f1) {
        best_f1 = f1;
        best_k = k;
      }
    }
    result.baseline.k = best_k;
    result.baseline.validation_f1 = best_f1;
    result.baseline.test_predictions.reserve(fold.test.min_sentence_distance.size());
    for (int dist : fold.test.min_sentence_distance)
      result.baseline.test_predictions.push_back(dist <= best_k);
    result.baseline.test = micro_metrics(result.baseline.test_predictions, fold.test.labels);
  }
  return result;
}

} // namespace

Metrics metrics_from_counts(long tp, long fp, long fn) {
  Metrics m;
  m.tp = tp;
  m.fp = fp;
  m.fn = fn;
  m.precision = tp + fp > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fp) : 0.0;
  m.recall = tp + fn > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fn) : 0.0;
  m.f1 = m.precision + m.recall > 0.0 ? 2.0 * m.precision * m.recall / (m.precision + m.recall)
                                      : 0.0;
  return m;
}

Metrics micro_metrics(const std::vector<bool>& predictions, const std::vector<bool>& gold) {
  if (predictions.size() != gold.size())
    throw std::invalid_argument("micro_metrics: prediction/gold length mismatch (" +
                                std::to_string(predictions.size()) + " vs " +
                                std::to_string(gold.size()) + ")");
  long tp = 0, fp = 0, fn = 0;
  for (size_t i = 0; i < gold.size(); ++i) {
    if (predictions[i] && gold[i]) ++tp;
    else if (predictions[i] && !gold[i]) ++fp;
    else if (!predictions[i] && gold[i]) ++fn;
  }
  return metrics_from_counts(tp, fp, fn);
}

std::vector<FoldSpec> make_folds(const Corpus& corpus, std::uint64_t master_seed) {
  std::vector<std::string> papers;
  papers.reserve(corpus.documents.size());
  for (const Document& doc : corpus.documents) papers.push_back(doc.paper_id);
  std::sort(papers.begin(), papers.end());
  if (papers.size() < static_cast<size_t>(kValidationPapers) + 2)
    throw std::invalid_argument("make_folds: need at least " +
                                std::to_string(kValidationPapers + 2) + " papers, got " +
                                std::to_string(papers.size()));

  std::vector<FoldSpec> folds;
  folds.reserve(papers.size());
  for (const std::string& test : papers) {
    FoldSpec fold;
    fold.test_paper = test;
    fold.seed = mix_seed(master_seed, fnv1a(test));
    std::vector<std::string> rest;
    rest.reserve(papers.size() - 1);
    for (const std::string& p : papers)
      if (p != test) rest.push_back(p);
    Rng rng(fold.seed);
    const auto idx = rng.sample_indices(rest.size(), kValidationPapers);
    std::vector<bool> in_validation(rest.size(), false);
    for (size_t i : idx) in_validation[i] = true;
    for (size_t i = 0; i < rest.size(); ++i) {
      if (in_validation[i])
        fold.validation_papers.push_back(rest[i]);
      else
        fold.training_papers.push_back(rest[i]);
    }
    folds.push_back(std::move(fold));
  }
  return folds;
}

std::vector<std::uint16_t> feature_subsets() {
  std::vector<std::uint16_t> out;
  out.reserve(1u << kFeatureGroupCount);
  for (std::uint32_t mask = 1; mask <= kFullSubset; ++mask)
    out.push_back(static_cast<std::uint16_t>(mask));
  return out;
}

std::vector<std::uint16_t> subset_search_order(int budget) {
  std::vector<std::vector<std::uint16_t>> by_size(kFeatureGroupCount + 1);
  for (std::uint16_t mask : feature_subsets())
    by_size[static_cast<size_t>(std::popcount(mask))].push_back(mask);

  std::vector<std::uint16_t> order;
  const size_t total = (1u << kFeatureGroupCount) - 1;
  const size_t want = budget <= 0 ? total : std::min<size_t>(static_cast<size_t>(budget), total);
  order.reserve(want);
  for (size_t round = 0; order.size() < want; ++round) {
    bool emitted = false;
    for (int size = kFeatureGroupCount; size >= 1 && order.size() < want; --size) {
      const auto& bucket = by_size[static_cast<size_t>(size)];
      if (round < bucket.size()) {
        order.push_back(bucket[round]);
        emitted = true;
      }
    }
    if (!emitted) break;
  }
  return order;
}

Vector mask_features(const Vector& aggregated, std::uint16_t subset,
                     const std::vector<FeatureGroup>& groups) {
  const Index d = static_cast<Index>(groups.size());
  if (aggregated.size() != 3 * d)
    throw std::invalid_argument("mask_features: aggregated length " +
                                std::to_string(aggregated.size()) + " does not match 3 x " +
                                std::to_string(d) + " columns");
  std::vector<Index> keep;
  keep.reserve(static_cast<size_t>(d));
  for (Index j = 0; j < d; ++j)
    if (subset_contains(subset, groups[static_cast<size_t>(j)])) keep.push_back(j);

  Vector out(3 * static_cast<Index>(keep.size()));
  Index o = 0;
  for (Index segment = 0; segment < 3; ++segment)
    for (Index j : keep) out[o++] = aggregated[segment * d + j];
  return out;
}

double bootstrap_compare(const std::vector<bool>& model_predictions,
                         const std::vector<bool>& baseline_predictions,
                         const std::vector<bool>& gold, int iterations, std::uint64_t seed) {
  if (gold.empty()) throw std::invalid_argument("bootstrap_compare: empty instance list");
  if (model_predictions.size() != gold.size() || baseline_predictions.size() != gold.size())
    throw std::invalid_argument("bootstrap_compare: prediction/gold length mismatch");
  if (iterations < 1) throw std::invalid_argument("bootstrap_compare: iterations must be >= 1");

  const size_t n = gold.size();
  Rng rng(seed);
  int wins = 0;
  for (int it = 0; it < iterations; ++it) {
    long m_tp = 0, m_fp = 0, m_fn = 0, b_tp = 0, b_fp = 0, b_fn = 0;
    for (size_t i = 0; i < n; ++i) {
      const size_t j = static_cast<size_t>(rng.below(n));
      const bool g = gold[j];
      const bool mp = model_predictions[j];
      const bool bp = baseline_predictions[j];
      if (mp && g) ++m_tp;
      else if (mp && !g) ++m_fp;
      else if (!mp && g) ++m_fn;
      if (bp && g) ++b_tp;
      else if (bp && !g) ++b_fp;
      else if (!bp && g) ++b_fn;
    }
    const double diff =
        metrics_from_counts(m_tp, m_fp, m_fn).f1 - metrics_from_counts(b_tp, b_fp, b_fn).f1;
    if (diff > 0.0) ++wins;
  }
  return static_cast<double>(wins) / static_cast<double>(iterations);
}

TrainedModel train_fold_model(const Corpus& corpus, const FoldSpec& fold, ModelKind kind,
                              std::uint16_t subset, const EvalConfig& config) {
  const PairCache cache = build_pair_cache(corpus, config.filter, 1);
  const FoldData data = prepare_fold(cache, fold, config.filter);
  return train_subset_model(data, kind, subset, config.train);
}

FoldResult run_fold(const Corpus& corpus, const FoldSpec& fold, const EvalConfig& config) {
  const PairCache cache = build_pair_cache(corpus, config.filter, 1);
  const FoldData data = prepare_fold(cache, fold, config.filter);
  const std::vector<std::uint16_t> subsets = subset_search_order(config.search_budget);

  std::vector<std::vector<double>> scores(config.models.size(),
                                          std::vector<double>(subsets.size(), kSkippedSubset));
  std::vector<std::vector<std::string>> errors(config.models.size());
  for (size_t ki = 0; ki < config.models.size(); ++ki) {
    for (size_t si = 0; si < subsets.size(); ++si) {
      std::string error;
      scores[ki][si] = evaluate_subset(data, config.models[ki], subsets[si], config.train, &error);
      if (!error.empty()) errors[ki].push_back(error);
    }
  }
  return finish_fold(data, subsets, scores, config, errors);
}

EvalReport run_cv(const Corpus& corpus, const EvalConfig& config) {
  EvalReport report;
  report.master_seed = config.master_seed;
  report.config_hash = config.config_hash;
  report.search_budget = config.search_budget;
  report.bootstrap_iterations = config.bootstrap_iterations;

  const std::vector<FoldSpec> folds = make_folds(corpus, config.master_seed);
  const PairCache cache = build_pair_cache(corpus, config.filter, config.workers);

  std::vector<FoldData> fold_data(folds.size());
  parallel_for(folds.size(), config.workers, [&](std::size_t i) {
    fold_data[i] = prepare_fold(cache, folds[i], config.filter);
  });

  const std::vector<std::uint16_t> subsets = subset_search_order(config.search_budget);

  // one slot per (fold, model, subset); tasks are independent and results are
  // reduced by index, so any worker count produces the same report
  std::vector<std::vector<std::vector<double>>> scores(
      folds.size(), std::vector<std::vector<double>>(
                        config.models.size(), std::vector<double>(subsets.size(), kSkippedSubset)));
  std::vector<std::vector<std::vector<std::string>>> errors(
      folds.size(), std::vector<std::vector<std::string>>(config.models.size()));

  const size_t task_count = folds.size() * config.models.size() * subsets.size();
  parallel_for(task_count, config.workers, [&](std::size_t t) {
    const size_t fi = t / (config.models.size() * subsets.size());
    const size_t rem = t % (config.models.size() * subsets.size());
    const size_t ki = rem / subsets.size();
    const size_t si = rem % subsets.size();
    std::string error;
    scores[fi][ki][si] =
        evaluate_subset(fold_data[fi], config.models[ki], subsets[si], config.train, &error);
    if (!error.empty()) {
      // slot-local, no lock needed: one task writes one (fi, ki, si)
      errors[fi][ki].push_back("fold " + fold_data[fi].spec.test_paper + ": " + error);
    }
  });

  report.folds.reserve(folds.size());
  for (size_t fi = 0; fi < folds.size(); ++fi)
    report.folds.push_back(finish_fold(fold_data[fi], subsets, scores[fi], config, errors[fi]));

  // pooled metrics, per-paper tables, feature usage
  std::vector<bool> gold_all;
  std::map<ModelKind, std::vector<bool>> preds_all;
  std::vector<bool> baseline_all;
  long b_tp = 0, b_fp = 0, b_fn = 0;
  std::map<ModelKind, std::tuple<long, long, long>> counts;
  for (const FoldResult& fold : report.folds) {
    gold_all.insert(gold_all.end(), fold.test_gold.begin(), fold.test_gold.end());
    baseline_all.insert(baseline_all.end(), fold.baseline.test_predictions.begin(),
                        fold.baseline.test_predictions.end());
    b_tp += fold.baseline.test.tp;
    b_fp += fold.baseline.test.fp;
    b_fn += fold.baseline.test.fn;
    report.baseline_per_paper_f1[fold.spec.test_paper] = fold.baseline.test.f1;
    for (const auto& [kind, outcome] : fold.models) {
      auto& [tp, fp, fn] = counts[kind];
      tp += outcome.test.tp;
      fp += outcome.test.fp;
      fn += outcome.test.fn;
      preds_all[kind].insert(preds_all[kind].end(), outcome.test_predictions.begin(),
                             outcome.test_predictions.end());
      report.per_paper_f1[kind][fold.spec.test_paper] = outcome.test.f1;
      auto& usage = report.feature_usage[kind];
      for (int g = 0; g < kFeatureGroupCount; ++g)
        if (subset_contains(outcome.subset, static_cast<FeatureGroup>(g))) ++usage[static_cast<size_t>(g)];
    }
  }
  report.baseline_pooled = metrics_from_counts(b_tp, b_fp, b_fn);
  for (const auto& [kind, c] : counts)
    report.pooled[kind] = metrics_from_counts(std::get<0>(c), std::get<1>(c), std::get<2>(c));

  for (const auto& [kind, preds] : preds_all) {
    BootstrapOutcome outcome;
    outcome.fraction = bootstrap_compare(
        preds, baseline_all, gold_all, config.bootstrap_iterations,
        mix_seed(mix_seed(config.master_seed, fnv1a("bootstrap")), static_cast<std::uint64_t>(kind)));
    outcome.significant = outcome.fraction >= 0.95;
    report.bootstrap[kind] = outcome;
  }
  return report;
}

namespace {

using nlohmann::json;

json metrics_to_json(const Metrics& m) {
  return json{{"tp", m.tp},           {"fp", m.fp},       {"fn", m.fn},
              {"precision", m.precision}, {"recall", m.recall}, {"f1", m.f1}};
}

json subset_to_json(std::uint16_t subset) {
  json arr = json::array();
  for (int g = 0; g < kFeatureGroupCount; ++g)
    if (subset_contains(subset, static_cast<FeatureGroup>(g)))
      arr.push_back(feature_group_name(static_cast<FeatureGroup>(g)));
  return arr;
}

} // namespace

std::string report_to_json(const EvalReport& report) {
  json j;
  j["master_seed"] = report.master_seed;
  j["config_hash"] = report.config_hash;
  j["search_budget"] = report.search_budget;
  j["bootstrap_iterations"] = report.bootstrap_iterations;

  json models = json::object();
  for (const auto& [kind, pooled] : report.pooled) {
    json mj;
    mj["pooled"] = metrics_to_json(pooled);
    json per_paper = json::object();
    for (const auto& [pid, f1] : report.per_paper_f1.at(kind)) per_paper[pid] = f1;
    mj["per_paper_f1"] = per_paper;
    json usage = json::object();
    const auto& counts = report.feature_usage.at(kind);
    for (int g = 0; g < kFeatureGroupCount; ++g)
      usage[feature_group_name(static_cast<FeatureGroup>(g))] = counts[static_cast<size_t>(g)];
    mj["feature_usage"] = usage;
    if (report.bootstrap.count(kind)) {
      const BootstrapOutcome& b = report.bootstrap.at(kind);
      mj["bootstrap"] = {{"fraction", b.fraction}, {"significant", b.significant}};
    }
    models[model_kind_name(kind)] = mj;
  }
  j["models"] = models;

  json baseline;
  baseline["pooled"] = metrics_to_json(report.baseline_pooled);
  json bpp = json::object();
  for (const auto& [pid, f1] : report.baseline_per_paper_f1) bpp[pid] = f1;
  baseline["per_paper_f1"] = bpp;
  j["baseline"] = baseline;

  json folds = json::array();
  for (const FoldResult& fold : report.folds) {
    json fj;
    fj["test_paper"] = fold.spec.test_paper;
    fj["validation_papers"] = fold.spec.validation_papers;
    fj["baseline_k"] = fold.baseline.k;
    fj["baseline_validation_f1"] = fold.baseline.validation_f1;
    json fm = json::object();
    for (const auto& [kind, outcome] : fold.models)
      fm[model_kind_name(kind)] = {{"subset", subset_to_json(outcome.subset)},
                                   {"subset_mask", outcome.subset},
                                   {"validation_f1", outcome.validation_f1},
                                   {"test", metrics_to_json(outcome.test)}};
    fj["models"] = fm;
    if (!fold.warnings.empty()) fj["warnings"] = fold.warnings;
    folds.push_back(fj);
  }
  j["folds"] = folds;
  return j.dump(2) + "\n";
}

void write_report_files(const EvalReport& report, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  {
    std::ofstream out(dir / "report.json", std::ios::binary);
    out << report_to_json(report);
  }
  const auto fmt_f1 = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return std::string(buf);
  };
  {
    std::ofstream out(dir / "per_paper_f1.csv");
    out << "paper_id,model,f1\n";
    for (const auto& [pid, f1] : report.baseline_per_paper_f1)
      out << pid << ",baseline," << fmt_f1(f1) << "\n";
    for (const auto& [kind, table] : report.per_paper_f1)
      for (const auto& [pid, f1] : table)
        out << pid << "," << model_kind_name(kind) << "," << fmt_f1(f1) << "\n";
  }
  {
    std::ofstream out(dir / "feature_usage.csv");
    out << "model,feature_group,count\n";
    for (const auto& [kind, counts] : report.feature_usage)
      for (int g = 0; g < kFeatureGroupCount; ++g)
        out << model_kind_name(kind) << "," << feature_group_name(static_cast<FeatureGroup>(g))
            << "," << counts[static_cast<size_t>(g)] << "\n";
  }
  {
    std::ofstream out(dir / "bootstrap.csv");
    out << "model,fraction,significant\n";
    for (const auto& [kind, outcome] : report.bootstrap)
      out << model_kind_name(kind) << "," << fmt_f1(outcome.fraction) << ","
          << (outcome.significant ? "true" : "false") << "\n";
  }
}

} // namespace ctxassoc
