#include "ctxassoc/classifiers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <tuple>

#include <json.hpp>

#include "ctxassoc/rng.hpp"

namespace ctxassoc {

namespace {

double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// log(1 + exp(t)) without overflow
double softplus(double t) { return t > 0 ? t + std::log1p(std::exp(-t)) : std::log1p(std::exp(t)); }

struct Dataset {
  Matrix X;      // standardized, n x d
  Vector y;      // 0/1
  Vector weight; // per-instance class weight
  double weight_sum = 0.0;
};

// Weighted cross-entropy with L2 on the weights (bias unregularized).
double lr_loss(const Dataset& d, double l2, const Vector& w, double b, Vector* grad_w,
               double* grad_b) {
  const Vector z = (d.X * w).array() + b;
  double loss = 0.0;
  Vector residual(z.size());
  for (Index i = 0; i < z.size(); ++i) {
    // ce = softplus(z) - y*z
    loss += d.weight[i] * (softplus(z[i]) - d.y[i] * z[i]);
    residual[i] = d.weight[i] * (sigmoid(z[i]) - d.y[i]);
  }
  loss = loss / d.weight_sum + 0.5 * l2 * w.squaredNorm();
  if (grad_w) *grad_w = d.X.transpose() * residual / d.weight_sum + l2 * w;
  if (grad_b) *grad_b = residual.sum() / d.weight_sum;
  return loss;
}

// Weighted hinge loss with L2; subgradient at the kink follows the zero branch.
double svm_loss(const Dataset& d, double l2, const Vector& w, double b, Vector* grad_w,
                double* grad_b) {
  const Vector z = (d.X * w).array() + b;
  double loss = 0.0;
  Vector residual = Vector::Zero(z.size());
  for (Index i = 0; i < z.size(); ++i) {
    const double s = d.y[i] > 0.5 ? 1.0 : -1.0;
    const double margin = s * z[i];
    if (margin < 1.0) {
      loss += d.weight[i] * (1.0 - margin);
      residual[i] = -d.weight[i] * s;
    }
  }
  loss = loss / d.weight_sum + 0.5 * l2 * w.squaredNorm();
  if (grad_w) *grad_w = d.X.transpose() * residual / d.weight_sum + l2 * w;
  if (grad_b) *grad_b = residual.sum() / d.weight_sum;
  return loss;
}

struct NetworkGradients {
  Matrix hidden_weights;
  Vector hidden_bias;
  Vector output_weights;
  double output_bias = 0.0;
};

// Weighted cross-entropy over the batch; gradients normalized by batch weight.
double nn_loss(const Matrix& X, const Vector& y, const Vector& weight, double weight_sum,
               const NetworkModel& net, NetworkGradients* grads) {
  const Index n = X.rows();
  Matrix z1 = X * net.hidden_weights.transpose();
  z1.rowwise() += net.hidden_bias.transpose();
  const Matrix a1 = z1.cwiseMax(0.0);
  const Vector z2 = (a1 * net.output_weights).array() + net.output_bias;

  double loss = 0.0;
  Vector dz2(n);
  for (Index i = 0; i < n; ++i) {
    loss += weight[i] * (softplus(z2[i]) - y[i] * z2[i]);
    dz2[i] = weight[i] * (sigmoid(z2[i]) - y[i]);
  }
  loss /= weight_sum;
  if (grads) {
    grads->output_weights = a1.transpose() * dz2 / weight_sum;
    grads->output_bias = dz2.sum() / weight_sum;
    Matrix dz1 = dz2 * net.output_weights.transpose(); // n x h
    dz1 = dz1.cwiseProduct((z1.array() > 0.0).cast<double>().matrix());
    grads->hidden_weights = dz1.transpose() * X / weight_sum;
    grads->hidden_bias = dz1.colwise().sum().transpose() / weight_sum;
  }
  return loss;
}

TrainedModel train_logistic(const TrainConfig& config, const Dataset& data) {
  TrainedModel model;
  model.kind = ModelKind::LogisticRegression;
  Vector w = Vector::Zero(data.X.cols());
  double b = 0.0;

  Vector grad_w;
  double grad_b = 0.0;
  double loss = lr_loss(data, config.logistic.l2, w, b, &grad_w, &grad_b);
  model.loss_history.push_back(loss);

  for (int iter = 0; iter < config.logistic.max_iterations; ++iter) {
    const double grad_norm2 = grad_w.squaredNorm() + grad_b * grad_b;
    if (grad_norm2 < 1e-18) break;
    // backtracking line search keeps the loss monotonically decreasing
    double step = 1.0;
    double new_loss = loss;
    Vector new_w;
    double new_b = 0.0;
    for (int bt = 0; bt < 60; ++bt) {
      new_w = w - step * grad_w;
      new_b = b - step * grad_b;
      new_loss = lr_loss(data, config.logistic.l2, new_w, new_b, nullptr, nullptr);
      if (new_loss <= loss - 1e-4 * step * grad_norm2) break;
      step *= 0.5;
    }
    if (new_loss > loss) break; // line search failed; stationary enough
    w = new_w;
    b = new_b;
    const double improvement = loss - new_loss;
    loss = new_loss;
    model.loss_history.push_back(loss);
    if (improvement < config.logistic.tolerance) break;
    lr_loss(data, config.logistic.l2, w, b, &grad_w, &grad_b);
  }
  model.linear.weights = std::move(w);
  model.linear.bias = b;
  return model;
}

TrainedModel train_svm(const TrainConfig& config, const Dataset& data) {
  TrainedModel model;
  model.kind = ModelKind::LinearSVM;
  Vector w = Vector::Zero(data.X.cols());
  double b = 0.0;
  for (int epoch = 1; epoch <= config.svm.epochs; ++epoch) {
    Vector grad_w;
    double grad_b = 0.0;
    const double loss = svm_loss(data, config.svm.l2, w, b, &grad_w, &grad_b);
    model.loss_history.push_back(loss);
    const double step = config.svm.step_scale / std::sqrt(static_cast<double>(epoch));
    w -= step * grad_w;
    b -= step * grad_b;
  }
  model.loss_history.push_back(svm_loss(data, config.svm.l2, w, b, nullptr, nullptr));
  model.linear.weights = std::move(w);
  model.linear.bias = b;
  return model;
}

// ---- random forest ----

struct TreeBuilder {
  const Dataset& data;
  const RandomForestConfig& cfg;
  int features_per_split;
  Rng rng;
  Tree tree;

  TreeBuilder(const Dataset& d, const RandomForestConfig& c, std::uint64_t seed)
      : data(d), cfg(c),
        features_per_split(c.features_per_split > 0
                               ? c.features_per_split
                               : static_cast<int>(std::ceil(std::sqrt(static_cast<double>(d.X.cols()))))),
        rng(seed) {}

  static double gini(double pos_weight, double total_weight) {
    if (total_weight <= 0.0) return 0.0;
    const double p = pos_weight / total_weight;
    return 1.0 - p * p - (1.0 - p) * (1.0 - p);
  }

  int build(std::vector<int>& samples, int depth) {
    double pos_weight = 0.0, total_weight = 0.0;
    for (int i : samples) {
      total_weight += data.weight[i];
      if (data.y[i] > 0.5) pos_weight += data.weight[i];
    }
    const bool pure = pos_weight <= 0.0 || pos_weight >= total_weight;

    const auto make_leaf = [&]() {
      TreeNode leaf;
      leaf.leaf_label = pos_weight * 2.0 >= total_weight; // tie -> positive
      tree.nodes.push_back(leaf);
      return static_cast<int>(tree.nodes.size()) - 1;
    };

    if (pure || depth >= cfg.max_depth ||
        static_cast<int>(samples.size()) < cfg.min_samples_split)
      return make_leaf();

    const double parent_gini = gini(pos_weight, total_weight);
    const auto feature_idx = rng.sample_indices(static_cast<size_t>(data.X.cols()),
                                                static_cast<size_t>(features_per_split));
    double best_gain = 0.0;
    int best_feature = -1;
    double best_threshold = 0.0;

    std::vector<std::pair<double, int>> values;
    for (size_t f : feature_idx) {
      values.clear();
      for (int i : samples) values.push_back({data.X(i, static_cast<Index>(f)), i});
      std::sort(values.begin(), values.end());

      double left_pos = 0.0, left_total = 0.0;
      for (size_t vi = 0; vi + 1 < values.size(); ++vi) {
        const int i = values[vi].second;
        left_total += data.weight[i];
        if (data.y[i] > 0.5) left_pos += data.weight[i];
        if (values[vi].first == values[vi + 1].first) continue;
        const double right_total = total_weight - left_total;
        const double right_pos = pos_weight - left_pos;
        const double gain = parent_gini - (left_total / total_weight) * gini(left_pos, left_total) -
                            (right_total / total_weight) * gini(right_pos, right_total);
        if (gain > best_gain + 1e-12) {
          best_gain = gain;
          best_feature = static_cast<int>(f);
          best_threshold = 0.5 * (values[vi].first + values[vi + 1].first);
        }
      }
    }

    if (best_feature < 0) return make_leaf();

    std::vector<int> left, right;
    for (int i : samples) {
      if (data.X(i, best_feature) <= best_threshold)
        left.push_back(i);
      else
        right.push_back(i);
    }
    if (left.empty() || right.empty()) return make_leaf();

    const int node_index = static_cast<int>(tree.nodes.size());
    tree.nodes.push_back(TreeNode{best_feature, best_threshold, -1, -1, false});
    tree.nodes[static_cast<size_t>(node_index)].left = build(left, depth + 1);
    tree.nodes[static_cast<size_t>(node_index)].right = build(right, depth + 1);
    return node_index;
  }
};

bool tree_predict(const Tree& tree, const Vector& x) {
  int node = 0;
  while (tree.nodes[static_cast<size_t>(node)].feature >= 0) {
    const TreeNode& n = tree.nodes[static_cast<size_t>(node)];
    node = x[n.feature] <= n.threshold ? n.left : n.right;
  }
  return tree.nodes[static_cast<size_t>(node)].leaf_label;
}

TrainedModel train_forest(const TrainConfig& config, const Dataset& data, bool single_class) {
  TrainedModel model;
  model.kind = ModelKind::RandomForest;
  if (single_class)
    model.warnings.push_back("random forest trained on a single-class set; predictor is constant");
  const int n = static_cast<int>(data.X.rows());
  model.forest.trees.reserve(static_cast<size_t>(config.forest.trees));
  for (int t = 0; t < config.forest.trees; ++t) {
    TreeBuilder builder(data, config.forest,
                        mix_seed(config.rng_seed, static_cast<std::uint64_t>(t)));
    // bootstrap sample of size n drawn with replacement
    std::vector<int> samples(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i)
      samples[static_cast<size_t>(i)] = static_cast<int>(builder.rng.below(static_cast<std::uint64_t>(n)));
    builder.build(samples, 0);
    model.forest.trees.push_back(std::move(builder.tree));
  }
  return model;
}

// ---- feed-forward network ----

NetworkModel init_network(int hidden, Index d, Rng& rng) {
  NetworkModel net;
  net.hidden_weights.resize(hidden, d);
  const double hidden_bound = 1.0 / std::sqrt(static_cast<double>(d));
  for (Index r = 0; r < net.hidden_weights.rows(); ++r)
    for (Index c = 0; c < net.hidden_weights.cols(); ++c)
      net.hidden_weights(r, c) = rng.real(-hidden_bound, hidden_bound);
  net.hidden_bias = Vector::Zero(hidden);
  net.output_weights.resize(hidden);
  const double output_bound = 1.0 / std::sqrt(static_cast<double>(hidden));
  for (Index r = 0; r < hidden; ++r) net.output_weights[r] = rng.real(-output_bound, output_bound);
  net.output_bias = 0.0;
  return net;
}

TrainedModel train_network(const TrainConfig& config, const Dataset& data) {
  TrainedModel model;
  model.kind = ModelKind::FeedForwardNN;
  Rng rng(config.rng_seed);
  NetworkModel net = init_network(config.network.hidden_units, data.X.cols(), rng);

  const Index n = data.X.rows();
  std::vector<Index> order(static_cast<size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  const Index batch_size = std::max<Index>(1, config.network.batch_size);

  for (int epoch = 0; epoch < config.network.epochs; ++epoch) {
    rng.shuffle(order);
    double epoch_loss = 0.0;
    Index batches = 0;
    for (Index start = 0; start < n; start += batch_size) {
      const Index count = std::min(batch_size, n - start);
      Matrix Xb(count, data.X.cols());
      Vector yb(count), wb(count);
      double wsum = 0.0;
      for (Index i = 0; i < count; ++i) {
        const Index src = order[static_cast<size_t>(start + i)];
        Xb.row(i) = data.X.row(src);
        yb[i] = data.y[src];
        wb[i] = data.weight[src];
        wsum += data.weight[src];
      }
      NetworkGradients grads;
      epoch_loss += nn_loss(Xb, yb, wb, wsum, net, &grads);
      ++batches;
      const double lr = config.network.learning_rate;
      net.hidden_weights -= lr * grads.hidden_weights;
      net.hidden_bias -= lr * grads.hidden_bias;
      net.output_weights -= lr * grads.output_weights;
      net.output_bias -= lr * grads.output_bias;
    }
    model.loss_history.push_back(batches > 0 ? epoch_loss / static_cast<double>(batches) : 0.0);
  }
  model.network = std::move(net);
  return model;
}

} // namespace

const char* model_kind_name(ModelKind k) {
  switch (k) {
    case ModelKind::Baseline: return "baseline";
    case ModelKind::LogisticRegression: return "logistic_regression";
    case ModelKind::LinearSVM: return "linear_svm";
    case ModelKind::RandomForest: return "random_forest";
    case ModelKind::FeedForwardNN: return "feed_forward_nn";
  }
  return "?";
}

void Standardizer::fit(const Matrix& X) {
  const double n = static_cast<double>(X.rows());
  mean = X.colwise().sum() / n;
  scale.resize(X.cols());
  for (Index c = 0; c < X.cols(); ++c) {
    const double var = (X.col(c).array() - mean[c]).square().sum() / n;
    const double sd = std::sqrt(var);
    scale[c] = sd > 1e-12 ? sd : 1.0;
  }
}

Matrix Standardizer::apply(const Matrix& X) const {
  Matrix out = X;
  out.rowwise() -= mean.transpose();
  out.array().rowwise() /= scale.transpose().array();
  return out;
}

Vector Standardizer::apply(const Vector& x) const {
  return (x - mean).cwiseQuotient(scale);
}

int candidate_min_sentence_distance(const TypeLevelCandidate& candidate, const Document& doc) {
  int best = std::numeric_limits<int>::max();
  for (const MentionPair& p : candidate.pairs) {
    const EventMention& e = doc.events[static_cast<size_t>(p.event_index)];
    const ContextMention& c = doc.contexts[static_cast<size_t>(p.context_index)];
    best = std::min(best, std::abs(e.sentence - c.sentence));
  }
  return best;
}

bool baseline_predict(const BaselineModel& model, int min_sentence_distance) {
  return min_sentence_distance <= model.k;
}

bool baseline_predict(const BaselineModel& model, const TypeLevelCandidate& candidate,
                      const Document& doc) {
  return baseline_predict(model, candidate_min_sentence_distance(candidate, doc));
}

TrainedModel train(const TrainConfig& config, std::span<const AggregatedInstance> instances,
                   std::uint16_t feature_subset) {
  if (instances.empty()) throw TrainingError("train: empty instance set");
  if (config.kind == ModelKind::Baseline)
    throw TrainingError("train: the baseline has no trainable parameters; search k instead");

  // order normalization so training is independent of caller ordering
  std::vector<const AggregatedInstance*> sorted;
  sorted.reserve(instances.size());
  for (const AggregatedInstance& inst : instances) sorted.push_back(&inst);
  std::sort(sorted.begin(), sorted.end(), [](const AggregatedInstance* a, const AggregatedInstance* b) {
    return std::tie(a->paper_id, a->event_id, a->grounding_id) <
           std::tie(b->paper_id, b->event_id, b->grounding_id);
  });

  const Index n = static_cast<Index>(sorted.size());
  const Index d = sorted.front()->vector.size();
  Matrix X(n, d);
  Vector y(n);
  Index n_pos = 0;
  for (Index i = 0; i < n; ++i) {
    if (sorted[static_cast<size_t>(i)]->vector.size() != d)
      throw TrainingError("train: inconsistent instance dimensions");
    X.row(i) = sorted[static_cast<size_t>(i)]->vector;
    y[i] = sorted[static_cast<size_t>(i)]->label ? 1.0 : 0.0;
    if (sorted[static_cast<size_t>(i)]->label) ++n_pos;
  }
  const Index n_neg = n - n_pos;
  const bool single_class = n_pos == 0 || n_neg == 0;
  if (single_class && config.kind != ModelKind::RandomForest)
    throw TrainingError(std::string("train: ") + model_kind_name(config.kind) +
                        " requires both classes in the training set");

  Dataset data;
  Standardizer standardizer;
  standardizer.fit(X);
  data.X = standardizer.apply(X);
  data.y = std::move(y);
  data.weight.resize(n);
  const double nd = static_cast<double>(n);
  const double w_pos = config.class_weighting && n_pos > 0 ? nd / (2.0 * static_cast<double>(n_pos)) : 1.0;
  const double w_neg = config.class_weighting && n_neg > 0 ? nd / (2.0 * static_cast<double>(n_neg)) : 1.0;
  for (Index i = 0; i < n; ++i) data.weight[i] = data.y[i] > 0.5 ? w_pos : w_neg;
  data.weight_sum = data.weight.sum();

  TrainedModel model;
  switch (config.kind) {
    case ModelKind::LogisticRegression: model = train_logistic(config, data); break;
    case ModelKind::LinearSVM: model = train_svm(config, data); break;
    case ModelKind::RandomForest: model = train_forest(config, data, single_class); break;
    case ModelKind::FeedForwardNN: model = train_network(config, data); break;
    case ModelKind::Baseline: break; // unreachable
  }
  model.standardizer = std::move(standardizer);
  model.feature_subset = feature_subset;
  return model;
}

Prediction predict(const TrainedModel& model, const Vector& vector) {
  if (vector.size() != model.standardizer.dimension())
    throw std::invalid_argument("predict: expected dimension " +
                                std::to_string(model.standardizer.dimension()) + ", got " +
                                std::to_string(vector.size()));
  const Vector x = model.standardizer.apply(vector);
  double score = 0.0;
  switch (model.kind) {
    case ModelKind::LogisticRegression:
    case ModelKind::LinearSVM:
      score = sigmoid(model.linear.weights.dot(x) + model.linear.bias);
      break;
    case ModelKind::RandomForest: {
      int votes = 0;
      for (const Tree& tree : model.forest.trees)
        if (tree_predict(tree, x)) ++votes;
      score = model.forest.trees.empty()
                  ? 0.0
                  : static_cast<double>(votes) / static_cast<double>(model.forest.trees.size());
      break;
    }
    case ModelKind::FeedForwardNN: {
      const Vector a1 = ((model.network.hidden_weights * x) + model.network.hidden_bias).cwiseMax(0.0);
      score = sigmoid(model.network.output_weights.dot(a1) + model.network.output_bias);
      break;
    }
    case ModelKind::Baseline:
      throw std::invalid_argument("predict: baseline models predict over candidates");
  }
  return Prediction{score >= 0.5, score};
}

double gradient_check(ModelKind kind, std::uint64_t seed) {
  constexpr double kStep = 1e-5;
  constexpr Index kN = 24;
  constexpr Index kD = 7;

  // resample until no hinge margin or ReLU pre-activation sits near a kink
  for (std::uint64_t attempt = 0;; ++attempt) {
    Rng rng(mix_seed(seed, attempt));
    Dataset data;
    data.X.resize(kN, kD);
    for (Index i = 0; i < kN; ++i)
      for (Index j = 0; j < kD; ++j) data.X(i, j) = rng.real(-2.0, 2.0);
    data.y.resize(kN);
    for (Index i = 0; i < kN; ++i) data.y[i] = rng.bernoulli(0.5) ? 1.0 : 0.0;
    data.weight = Vector::Ones(kN);
    data.weight_sum = static_cast<double>(kN);

    const double l2 = 0.5;
    const auto relative_error = [](double a, double f) {
      return std::abs(a - f) / std::max({1.0, std::abs(a), std::abs(f)});
    };

    if (kind == ModelKind::LogisticRegression || kind == ModelKind::LinearSVM) {
      Vector w(kD);
      for (Index j = 0; j < kD; ++j) w[j] = rng.real(-1.0, 1.0);
      double b = rng.real(-1.0, 1.0);

      if (kind == ModelKind::LinearSVM) {
        const Vector z = (data.X * w).array() + b;
        bool near_kink = false;
        for (Index i = 0; i < kN; ++i) {
          const double s = data.y[i] > 0.5 ? 1.0 : -1.0;
          if (std::abs(1.0 - s * z[i]) < 1e-3) near_kink = true;
        }
        if (near_kink) continue;
      }

      const auto loss_fn = kind == ModelKind::LogisticRegression ? lr_loss : svm_loss;
      Vector grad_w;
      double grad_b = 0.0;
      loss_fn(data, l2, w, b, &grad_w, &grad_b);

      double max_err = 0.0;
      for (Index j = 0; j < kD; ++j) {
        Vector wp = w, wm = w;
        wp[j] += kStep;
        wm[j] -= kStep;
        const double fd = (loss_fn(data, l2, wp, b, nullptr, nullptr) -
                           loss_fn(data, l2, wm, b, nullptr, nullptr)) /
                          (2 * kStep);
        max_err = std::max(max_err, relative_error(grad_w[j], fd));
      }
      const double fd_b = (loss_fn(data, l2, w, b + kStep, nullptr, nullptr) -
                           loss_fn(data, l2, w, b - kStep, nullptr, nullptr)) /
                          (2 * kStep);
      max_err = std::max(max_err, relative_error(grad_b, fd_b));
      return max_err;
    }

    if (kind == ModelKind::FeedForwardNN) {
      const int hidden = 5;
      NetworkModel net = init_network(hidden, kD, rng);
      for (Index r = 0; r < net.hidden_weights.rows(); ++r)
        for (Index c = 0; c < net.hidden_weights.cols(); ++c)
          net.hidden_weights(r, c) = rng.real(-1.0, 1.0);
      for (Index r = 0; r < hidden; ++r) {
        net.hidden_bias[r] = rng.real(-0.5, 0.5);
        net.output_weights[r] = rng.real(-1.0, 1.0);
      }
      net.output_bias = rng.real(-0.5, 0.5);

      Matrix z1 = data.X * net.hidden_weights.transpose();
      z1.rowwise() += net.hidden_bias.transpose();
      if (z1.array().abs().minCoeff() < 1e-3) continue; // too close to a ReLU kink

      NetworkGradients grads;
      nn_loss(data.X, data.y, data.weight, data.weight_sum, net, &grads);
      const auto loss_at = [&](const NetworkModel& m) {
        return nn_loss(data.X, data.y, data.weight, data.weight_sum, m, nullptr);
      };

      double max_err = 0.0;
      const auto check_param = [&](double& param, double analytic) {
        const double saved = param;
        param = saved + kStep;
        const double up = loss_at(net);
        param = saved - kStep;
        const double down = loss_at(net);
        param = saved;
        max_err = std::max(max_err, relative_error(analytic, (up - down) / (2 * kStep)));
      };
      for (Index r = 0; r < net.hidden_weights.rows(); ++r)
        for (Index c = 0; c < net.hidden_weights.cols(); ++c)
          check_param(net.hidden_weights(r, c), grads.hidden_weights(r, c));
      for (Index r = 0; r < hidden; ++r) check_param(net.hidden_bias[r], grads.hidden_bias[r]);
      for (Index r = 0; r < hidden; ++r)
        check_param(net.output_weights[r], grads.output_weights[r]);
      check_param(net.output_bias, grads.output_bias);
      return max_err;
    }

    throw std::invalid_argument("gradient_check: unsupported model kind");
  }
}

// ---- serialization ----

namespace {

using nlohmann::json;

json vector_to_json(const Vector& v) {
  json arr = json::array();
  for (Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

Vector vector_from_json(const json& arr) {
  Vector v(static_cast<Index>(arr.size()));
  Index i = 0;
  for (const json& x : arr) v[i++] = x.get<double>();
  return v;
}

json matrix_to_json(const Matrix& m) {
  json flat = json::array();
  for (Index r = 0; r < m.rows(); ++r)
    for (Index c = 0; c < m.cols(); ++c) flat.push_back(m(r, c));
  return json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", flat}};
}

Matrix matrix_from_json(const json& j) {
  Matrix m(j.at("rows").get<Index>(), j.at("cols").get<Index>());
  const json& flat = j.at("data");
  Index k = 0;
  for (Index r = 0; r < m.rows(); ++r)
    for (Index c = 0; c < m.cols(); ++c) m(r, c) = flat.at(static_cast<size_t>(k++)).get<double>();
  return m;
}

ModelKind kind_from_name(const std::string& name) {
  for (ModelKind k : {ModelKind::Baseline, ModelKind::LogisticRegression, ModelKind::LinearSVM,
                      ModelKind::RandomForest, ModelKind::FeedForwardNN})
    if (name == model_kind_name(k)) return k;
  throw std::invalid_argument("unknown model kind '" + name + "'");
}

} // namespace

std::string model_to_json(const TrainedModel& model) {
  json j;
  j["kind"] = model_kind_name(model.kind);
  j["feature_subset"] = model.feature_subset;
  j["standardizer"] = {{"mean", vector_to_json(model.standardizer.mean)},
                       {"scale", vector_to_json(model.standardizer.scale)}};
  switch (model.kind) {
    case ModelKind::LogisticRegression:
    case ModelKind::LinearSVM:
      j["linear"] = {{"weights", vector_to_json(model.linear.weights)},
                     {"bias", model.linear.bias}};
      break;
    case ModelKind::RandomForest: {
      json trees = json::array();
      for (const Tree& tree : model.forest.trees) {
        json nodes = json::array();
        for (const TreeNode& n : tree.nodes)
          nodes.push_back({{"feature", n.feature},
                           {"threshold", n.threshold},
                           {"left", n.left},
                           {"right", n.right},
                           {"leaf_label", n.leaf_label}});
        trees.push_back({{"nodes", nodes}});
      }
      j["forest"] = {{"trees", trees}};
      break;
    }
    case ModelKind::FeedForwardNN:
      j["network"] = {{"hidden_weights", matrix_to_json(model.network.hidden_weights)},
                      {"hidden_bias", vector_to_json(model.network.hidden_bias)},
                      {"output_weights", vector_to_json(model.network.output_weights)},
                      {"output_bias", model.network.output_bias}};
      break;
    case ModelKind::Baseline: break;
  }
  return j.dump(2) + "\n";
}

TrainedModel model_from_json(const std::string& text) {
  const json j = json::parse(text);
  TrainedModel model;
  model.kind = kind_from_name(j.at("kind").get<std::string>());
  model.feature_subset = j.at("feature_subset").get<std::uint16_t>();
  model.standardizer.mean = vector_from_json(j.at("standardizer").at("mean"));
  model.standardizer.scale = vector_from_json(j.at("standardizer").at("scale"));
  switch (model.kind) {
    case ModelKind::LogisticRegression:
    case ModelKind::LinearSVM:
      model.linear.weights = vector_from_json(j.at("linear").at("weights"));
      model.linear.bias = j.at("linear").at("bias").get<double>();
      break;
    case ModelKind::RandomForest:
      for (const json& tj : j.at("forest").at("trees")) {
        Tree tree;
        for (const json& nj : tj.at("nodes"))
          tree.nodes.push_back(TreeNode{nj.at("feature").get<int>(),
                                        nj.at("threshold").get<double>(),
                                        nj.at("left").get<int>(), nj.at("right").get<int>(),
                                        nj.at("leaf_label").get<bool>()});
        model.forest.trees.push_back(std::move(tree));
      }
      break;
    case ModelKind::FeedForwardNN:
      model.network.hidden_weights = matrix_from_json(j.at("network").at("hidden_weights"));
      model.network.hidden_bias = vector_from_json(j.at("network").at("hidden_bias"));
      model.network.output_weights = vector_from_json(j.at("network").at("output_weights"));
      model.network.output_bias = j.at("network").at("output_bias").get<double>();
      break;
    case ModelKind::Baseline: break;
  }
  return model;
}

} // namespace ctxassoc
