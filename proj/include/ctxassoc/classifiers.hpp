#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ctxassoc/aggregate.hpp"
#include "ctxassoc/types.hpp"

namespace ctxassoc {

enum class ModelKind { Baseline, LogisticRegression, LinearSVM, RandomForest, FeedForwardNN };

const char* model_kind_name(ModelKind k);

class TrainingError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Per-coordinate centering and scaling fitted on training data;
// zero-variance coordinates pass through with scale 1 after centering.
struct Standardizer {
  Vector mean;
  Vector scale;

  void fit(const Matrix& X);
  Matrix apply(const Matrix& X) const;
  Vector apply(const Vector& x) const;
  Index dimension() const { return mean.size(); }
};

// Algorithm: predict associated iff some mention of the context type lies
// within k sentences of the event.
struct BaselineModel {
  int k = 0; // window half-width in [0, 6]
};

inline constexpr int kBaselineMaxK = 6;

bool baseline_predict(const BaselineModel& model, const TypeLevelCandidate& candidate,
                      const Document& doc);
bool baseline_predict(const BaselineModel& model, int min_sentence_distance);
int candidate_min_sentence_distance(const TypeLevelCandidate& candidate, const Document& doc);

struct LogisticRegressionConfig {
  double l2 = 1.0;
  int max_iterations = 500;
  double tolerance = 1e-6;
};

struct LinearSvmConfig {
  double l2 = 1.0;
  double step_scale = 0.1; // step at epoch t is step_scale / sqrt(t)
  int epochs = 200;
};

struct RandomForestConfig {
  int trees = 100;
  int max_depth = 10;
  int min_samples_split = 2;
  int features_per_split = 0; // 0 = ceil(sqrt(d))
};

struct NetworkConfig {
  int hidden_units = 20;
  double learning_rate = 0.01;
  int batch_size = 32;
  int epochs = 100;
};

struct TrainConfig {
  ModelKind kind = ModelKind::LogisticRegression;
  LogisticRegressionConfig logistic;
  LinearSvmConfig svm;
  RandomForestConfig forest;
  NetworkConfig network;
  std::uint64_t rng_seed = 0;
  bool class_weighting = true;
};

struct LinearModel {
  Vector weights;
  double bias = 0.0;
};

struct TreeNode {
  int feature = -1; // -1 marks a leaf
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  bool leaf_label = false;
};

struct Tree {
  std::vector<TreeNode> nodes; // node 0 is the root
};

struct ForestModel {
  std::vector<Tree> trees;
};

struct NetworkModel {
  Matrix hidden_weights; // hidden_units x d
  Vector hidden_bias;
  Vector output_weights;
  double output_bias = 0.0;
};

struct TrainedModel {
  ModelKind kind = ModelKind::LogisticRegression;
  Standardizer standardizer;
  std::uint16_t feature_subset = 0x3FFF;
  LinearModel linear;   // LR / SVM
  ForestModel forest;   // RF
  NetworkModel network; // NN
  std::vector<double> loss_history;
  std::vector<std::string> warnings;
};

struct Prediction {
  bool label = false;
  double score = 0.0; // in [0, 1]; label = score >= 0.5
};

// Deterministic given (config.rng_seed, instances); instances are order
// normalized by (paper_id, event_id, grounding_id) before training.
TrainedModel train(const TrainConfig& config, std::span<const AggregatedInstance> instances,
                   std::uint16_t feature_subset = 0x3FFF);

Prediction predict(const TrainedModel& model, const Vector& vector);

// Analytic gradient vs central finite differences (step 1e-5) on seeded
// random data; returns the max relative error over all parameters.
double gradient_check(ModelKind kind, std::uint64_t seed);

std::string model_to_json(const TrainedModel& model);
TrainedModel model_from_json(const std::string& text);

} // namespace ctxassoc
