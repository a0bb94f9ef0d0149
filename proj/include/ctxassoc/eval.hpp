#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "ctxassoc/classifiers.hpp"
#include "ctxassoc/corpus.hpp"

namespace ctxassoc {

struct Metrics {
  long tp = 0;
  long fp = 0;
  long fn = 0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

Metrics metrics_from_counts(long tp, long fp, long fn);

// Pooled counts over aligned prediction/gold lists; throws on length mismatch.
Metrics micro_metrics(const std::vector<bool>& predictions, const std::vector<bool>& gold);

// One fold per paper; 4 validation papers drawn uniformly from the remainder
// with a seed derived from (master_seed, test paper id).
struct FoldSpec {
  std::string test_paper;
  std::vector<std::string> validation_papers;
  std::vector<std::string> training_papers;
  std::uint64_t seed = 0;
};

inline constexpr int kValidationPapers = 4;

std::vector<FoldSpec> make_folds(const Corpus& corpus, std::uint64_t master_seed);

// All 16,383 non-empty subsets of the 14 feature groups, ascending bitmask order.
std::vector<std::uint16_t> feature_subsets();

// Deterministic stratified prefix used under a search budget: the full set
// first, then round-robin across subset sizes. Budget >= 16,383 returns every
// subset.
std::vector<std::uint16_t> subset_search_order(int budget);

inline bool subset_contains(std::uint16_t subset, FeatureGroup g) {
  return (subset >> static_cast<int>(g)) & 1;
}

// Drops the coordinates of excluded groups from an aggregated (mean|min|max)
// vector; `groups` maps each base column to its owning group.
Vector mask_features(const Vector& aggregated, std::uint16_t subset,
                     const std::vector<FeatureGroup>& groups);

struct ModelOutcome {
  std::uint16_t subset = 0x3FFF;
  double validation_f1 = 0.0;
  Metrics test;
  std::vector<bool> test_predictions;
};

struct BaselineOutcome {
  int k = 0;
  double validation_f1 = 0.0;
  Metrics test;
  std::vector<bool> test_predictions;
};

struct FoldResult {
  FoldSpec spec;
  std::map<ModelKind, ModelOutcome> models;
  BaselineOutcome baseline;
  std::vector<bool> test_gold;
  std::vector<std::string> test_keys; // "event_id|grounding_id" per test instance
  std::vector<std::string> warnings;  // subsets skipped due to training errors
};

struct EvalConfig {
  TrainConfig train; // hyperparameters; kind/rng_seed are set per task
  std::vector<ModelKind> models = {ModelKind::LogisticRegression, ModelKind::LinearSVM,
                                   ModelKind::RandomForest, ModelKind::FeedForwardNN};
  CategoryFilter filter = CategoryFilter::Restricted;
  int search_budget = 16383;
  int bootstrap_iterations = 1000;
  int workers = 1;
  std::uint64_t master_seed = 0;
  std::string config_hash;
};

struct BootstrapOutcome {
  double fraction = 0.0;
  bool significant = false;
};

struct EvalReport {
  std::uint64_t master_seed = 0;
  std::string config_hash;
  int search_budget = 0;
  int bootstrap_iterations = 0;
  std::vector<FoldResult> folds;
  std::map<ModelKind, Metrics> pooled;
  std::map<ModelKind, std::map<std::string, double>> per_paper_f1;
  std::map<ModelKind, std::array<int, kFeatureGroupCount>> feature_usage;
  std::map<ModelKind, BootstrapOutcome> bootstrap;
  Metrics baseline_pooled;
  std::map<std::string, double> baseline_per_paper_f1;
};

// Fraction of resamples (instance indices drawn with replacement) in which
// the model's F1 strictly exceeds the baseline's.
double bootstrap_compare(const std::vector<bool>& model_predictions,
                         const std::vector<bool>& baseline_predictions,
                         const std::vector<bool>& gold, int iterations, std::uint64_t seed);

FoldResult run_fold(const Corpus& corpus, const FoldSpec& fold, const EvalConfig& config);

EvalReport run_cv(const Corpus& corpus, const EvalConfig& config);

// Retrains one fold's model for a fixed subset, reproducing the search task
// bit for bit (same derived seed); used to export winning models.
TrainedModel train_fold_model(const Corpus& corpus, const FoldSpec& fold, ModelKind kind,
                              std::uint16_t subset, const EvalConfig& config);

std::string report_to_json(const EvalReport& report);

// report.json, per_paper_f1.csv, feature_usage.csv, bootstrap.csv
void write_report_files(const EvalReport& report, const std::filesystem::path& dir);

} // namespace ctxassoc
