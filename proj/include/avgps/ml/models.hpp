#pragma once

#include <cstdint>
#include <vector>

#include "avgps/rng.hpp"

namespace avgps::ml {

// Row-major sample matrix with 0/1 labels.
struct TrainSet {
  std::vector<std::vector<double>> x;
  std::vector<int> y;
};

// ---------------------------------------------------------------------------
// Decision tree: greedy Gini splits on raw feature values, midpoint
// thresholds, ties broken toward the lowest feature index and then the
// lowest threshold. Leaf value is the positive-class fraction.

struct TreeConfig {
  int max_depth = 12;
  int min_samples_split = 2;
  int features_per_split = 0;  // 0: consider all features
};

class DecisionTree {
 public:
  void fit(const TrainSet& data, const TreeConfig& cfg, std::uint64_t seed);
  double score(const std::vector<double>& x) const;

  struct Node {
    int feature = -1;       // -1 marks a leaf
    double threshold = 0.0;  // go left when x[feature] <= threshold
    int left = -1;
    int right = -1;
    double value = 0.0;  // leaf positive fraction
  };
  const std::vector<Node>& nodes() const { return nodes_; }
  void restore(std::vector<Node> nodes) { nodes_ = std::move(nodes); }

 private:
  int build(const TrainSet& data, std::vector<int>& idx, int lo, int hi, int depth,
            const TreeConfig& cfg, CounterRng& rng);
  std::vector<Node> nodes_;
};

// ---------------------------------------------------------------------------
// Random forest: bootstrap-bagged trees with per-split feature subsampling;
// tree t is seeded by (seed, t). Score is the mean of the member scores.

struct ForestConfig {
  int n_trees = 30;
  TreeConfig tree{12, 2, 4};
};

class RandomForest {
 public:
  void fit(const TrainSet& data, const ForestConfig& cfg, std::uint64_t seed);
  double score(const std::vector<double>& x) const;
  const std::vector<DecisionTree>& trees() const { return trees_; }
  void restore(const std::vector<std::vector<DecisionTree::Node>>& trees) {
    trees_.clear();
    for (const auto& nodes : trees) {
      DecisionTree t;
      t.restore(nodes);
      trees_.push_back(std::move(t));
    }
  }

 private:
  std::vector<DecisionTree> trees_;
};

// ---------------------------------------------------------------------------
// One-hidden-layer perceptron: tanh hidden units, logistic output,
// cross-entropy loss, mini-batch gradient descent.

struct MlpConfig {
  int hidden = 32;
  double learning_rate = 0.01;
  int epochs = 200;
  int batch_size = 32;
};

class Mlp {
 public:
  void init(int n_inputs, const MlpConfig& cfg, std::uint64_t seed);
  void fit(const TrainSet& data, const MlpConfig& cfg, std::uint64_t seed);
  double score(const std::vector<double>& x) const;

  // Mean cross-entropy over the batch plus its gradient in the flat
  // parameter vector; used by training and by the finite-difference check.
  double loss_and_gradient(const TrainSet& batch, std::vector<double>* grad) const;

  std::vector<double>& parameters() { return params_; }
  const std::vector<double>& parameters() const { return params_; }
  int n_inputs() const { return n_inputs_; }
  int n_hidden() const { return n_hidden_; }

 private:
  // Layout: W1 (hidden x inputs), b1 (hidden), W2 (hidden), b2 (1).
  int n_inputs_ = 0;
  int n_hidden_ = 0;
  std::vector<double> params_;
};

// ---------------------------------------------------------------------------
// Logistic regression trained by full-batch gradient descent.

struct LogRegConfig {
  double learning_rate = 0.1;
  int epochs = 400;
};

class LogisticRegression {
 public:
  void fit(const TrainSet& data, const LogRegConfig& cfg);
  double score(const std::vector<double>& x) const;

  std::vector<double>& weights() { return w_; }
  const std::vector<double>& weights() const { return w_; }
  double& bias() { return b_; }
  double bias() const { return b_; }

 private:
  std::vector<double> w_;
  double b_ = 0.0;
};

}  // namespace avgps::ml
