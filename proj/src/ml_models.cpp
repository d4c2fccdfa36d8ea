#include "avgps/ml/models.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace avgps::ml {

namespace {

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

// Deterministic Fisher-Yates driven by the counter stream.
void shuffle_indices(std::vector<int>& idx, CounterRng& rng) {
  for (std::size_t i = idx.size(); i > 1; --i) {
    std::size_t j = rng.next_u64() % i;
    std::swap(idx[i - 1], idx[j]);
  }
}

}  // namespace

// ----------------------------------------------------------------- tree ----

void DecisionTree::fit(const TrainSet& data, const TreeConfig& cfg, std::uint64_t seed) {
  if (data.x.empty() || data.x.size() != data.y.size())
    throw std::invalid_argument("tree training needs matching samples and labels");
  nodes_.clear();
  std::vector<int> idx(data.x.size());
  std::iota(idx.begin(), idx.end(), 0);
  CounterRng rng(seed, 17);
  build(data, idx, 0, static_cast<int>(idx.size()), 0, cfg, rng);
}

int DecisionTree::build(const TrainSet& data, std::vector<int>& idx, int lo, int hi, int depth,
                        const TreeConfig& cfg, CounterRng& rng) {
  const int n = hi - lo;
  int positives = 0;
  for (int i = lo; i < hi; ++i) positives += data.y[idx[i]];

  int node_id = static_cast<int>(nodes_.size());
  nodes_.push_back(Node{});
  nodes_[node_id].value = static_cast<double>(positives) / n;

  bool pure = positives == 0 || positives == n;
  if (pure || depth >= cfg.max_depth || n < cfg.min_samples_split) return node_id;

  const int n_features = static_cast<int>(data.x[0].size());
  std::vector<int> features(n_features);
  std::iota(features.begin(), features.end(), 0);
  if (cfg.features_per_split > 0 && cfg.features_per_split < n_features) {
    shuffle_indices(features, rng);
    features.resize(cfg.features_per_split);
    std::sort(features.begin(), features.end());
  }

  // Parent Gini impurity times n; split gain is the weighted-impurity drop.
  auto gini_term = [](int pos, int count) {
    if (count == 0) return 0.0;
    double p = static_cast<double>(pos) / count;
    return count * 2.0 * p * (1.0 - p);
  };
  const double parent = gini_term(positives, n);

  int best_feature = -1;
  double best_threshold = 0.0;
  double best_gain = 1e-12;  // require a strictly positive improvement

  std::vector<std::pair<double, int>> vals(n);
  for (int f : features) {
    for (int i = 0; i < n; ++i) {
      int row = idx[lo + i];
      vals[i] = {data.x[row][f], data.y[row]};
    }
    std::sort(vals.begin(), vals.end());
    int left_pos = 0;
    for (int i = 0; i < n - 1; ++i) {
      left_pos += vals[i].second;
      if (vals[i].first == vals[i + 1].first) continue;
      double gain = parent - gini_term(left_pos, i + 1) - gini_term(positives - left_pos, n - i - 1);
      if (gain > best_gain) {
        best_gain = gain;
        best_feature = f;
        best_threshold = 0.5 * (vals[i].first + vals[i + 1].first);
      }
    }
  }
  if (best_feature < 0) return node_id;

  auto mid = std::partition(idx.begin() + lo, idx.begin() + hi, [&](int row) {
    return data.x[row][best_feature] <= best_threshold;
  });
  int split = static_cast<int>(mid - idx.begin());
  if (split == lo || split == hi) return node_id;

  nodes_[node_id].feature = best_feature;
  nodes_[node_id].threshold = best_threshold;
  int left = build(data, idx, lo, split, depth + 1, cfg, rng);
  int right = build(data, idx, split, hi, depth + 1, cfg, rng);
  nodes_[node_id].left = left;
  nodes_[node_id].right = right;
  return node_id;
}

double DecisionTree::score(const std::vector<double>& x) const {
  if (nodes_.empty()) throw std::logic_error("tree not trained");
  int cur = 0;
  while (nodes_[cur].feature >= 0)
    cur = x[nodes_[cur].feature] <= nodes_[cur].threshold ? nodes_[cur].left : nodes_[cur].right;
  return nodes_[cur].value;
}

// --------------------------------------------------------------- forest ----

void RandomForest::fit(const TrainSet& data, const ForestConfig& cfg, std::uint64_t seed) {
  trees_.assign(cfg.n_trees, DecisionTree{});
  const int n = static_cast<int>(data.x.size());
  for (int t = 0; t < cfg.n_trees; ++t) {
    CounterRng boot(seed, 1000 + static_cast<std::uint64_t>(t));
    TrainSet sample;
    sample.x.reserve(n);
    sample.y.reserve(n);
    for (int i = 0; i < n; ++i) {
      int row = static_cast<int>(boot.next_u64() % static_cast<std::uint64_t>(n));
      sample.x.push_back(data.x[row]);
      sample.y.push_back(data.y[row]);
    }
    trees_[t].fit(sample, cfg.tree, seed + static_cast<std::uint64_t>(t));
  }
}

double RandomForest::score(const std::vector<double>& x) const {
  if (trees_.empty()) throw std::logic_error("forest not trained");
  double acc = 0.0;
  for (const DecisionTree& t : trees_) acc += t.score(x);
  return acc / static_cast<double>(trees_.size());
}

// ------------------------------------------------------------------ mlp ----

void Mlp::init(int n_inputs, const MlpConfig& cfg, std::uint64_t seed) {
  n_inputs_ = n_inputs;
  n_hidden_ = cfg.hidden;
  params_.assign(static_cast<std::size_t>(n_hidden_) * n_inputs_ + n_hidden_ + n_hidden_ + 1, 0.0);
  CounterRng rng(seed, 23);
  double s1 = 1.0 / std::sqrt(static_cast<double>(n_inputs_));
  double s2 = 1.0 / std::sqrt(static_cast<double>(n_hidden_));
  std::size_t k = 0;
  for (int i = 0; i < n_hidden_ * n_inputs_; ++i) params_[k++] = rng.uniform(-s1, s1);
  k += n_hidden_;  // hidden biases start at zero
  for (int i = 0; i < n_hidden_; ++i) params_[k++] = rng.uniform(-s2, s2);
}

double Mlp::loss_and_gradient(const TrainSet& batch, std::vector<double>* grad) const {
  const int nh = n_hidden_, ni = n_inputs_;
  const double* w1 = params_.data();
  const double* b1 = w1 + static_cast<std::size_t>(nh) * ni;
  const double* w2 = b1 + nh;
  const double b2 = w2[nh];

  if (grad) grad->assign(params_.size(), 0.0);
  double* g1 = grad ? grad->data() : nullptr;
  double* gb1 = g1 ? g1 + static_cast<std::size_t>(nh) * ni : nullptr;
  double* g2 = gb1 ? gb1 + nh : nullptr;

  const std::size_t n = batch.x.size();
  double loss = 0.0;
  std::vector<double> h(nh);
  for (std::size_t s = 0; s < n; ++s) {
    const std::vector<double>& x = batch.x[s];
    double z2 = b2;
    for (int j = 0; j < nh; ++j) {
      double z = b1[j];
      const double* wrow = w1 + static_cast<std::size_t>(j) * ni;
      for (int i = 0; i < ni; ++i) z += wrow[i] * x[i];
      h[j] = std::tanh(z);
      z2 += w2[j] * h[j];
    }
    double p = sigmoid(z2);
    double y = batch.y[s];
    const double eps = 1e-12;
    loss += -(y * std::log(p + eps) + (1.0 - y) * std::log(1.0 - p + eps));

    if (grad) {
      double dz2 = (p - y) / static_cast<double>(n);
      for (int j = 0; j < nh; ++j) {
        g2[j] += dz2 * h[j];
        double dh = dz2 * w2[j] * (1.0 - h[j] * h[j]);
        gb1[j] += dh;
        double* grow = g1 + static_cast<std::size_t>(j) * ni;
        for (int i = 0; i < ni; ++i) grow[i] += dh * x[i];
      }
      g2[nh] += dz2;
    }
  }
  return loss / static_cast<double>(n);
}

void Mlp::fit(const TrainSet& data, const MlpConfig& cfg, std::uint64_t seed) {
  if (data.x.empty()) throw std::invalid_argument("mlp training needs samples");
  init(static_cast<int>(data.x[0].size()), cfg, seed);
  CounterRng order_rng(seed, 29);
  std::vector<int> order(data.x.size());
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> grad;
  TrainSet batch;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    shuffle_indices(order, order_rng);
    for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
      std::size_t end = std::min(order.size(), start + cfg.batch_size);
      batch.x.clear();
      batch.y.clear();
      for (std::size_t i = start; i < end; ++i) {
        batch.x.push_back(data.x[order[i]]);
        batch.y.push_back(data.y[order[i]]);
      }
      loss_and_gradient(batch, &grad);
      for (std::size_t k = 0; k < params_.size(); ++k)
        params_[k] -= cfg.learning_rate * grad[k];
    }
  }
}

double Mlp::score(const std::vector<double>& x) const {
  if (params_.empty()) throw std::logic_error("mlp not trained");
  const int nh = n_hidden_, ni = n_inputs_;
  const double* w1 = params_.data();
  const double* b1 = w1 + static_cast<std::size_t>(nh) * ni;
  const double* w2 = b1 + nh;
  double z2 = w2[nh];
  for (int j = 0; j < nh; ++j) {
    double z = b1[j];
    const double* wrow = w1 + static_cast<std::size_t>(j) * ni;
    for (int i = 0; i < ni; ++i) z += wrow[i] * x[i];
    z2 += w2[j] * std::tanh(z);
  }
  return sigmoid(z2);
}

// --------------------------------------------------------------- logreg ----

void LogisticRegression::fit(const TrainSet& data, const LogRegConfig& cfg) {
  if (data.x.empty()) throw std::invalid_argument("logreg training needs samples");
  const std::size_t ni = data.x[0].size();
  const std::size_t n = data.x.size();
  w_.assign(ni, 0.0);
  b_ = 0.0;
  std::vector<double> gw(ni);
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    std::fill(gw.begin(), gw.end(), 0.0);
    double gb = 0.0;
    for (std::size_t s = 0; s < n; ++s) {
      double z = b_;
      for (std::size_t i = 0; i < ni; ++i) z += w_[i] * data.x[s][i];
      double err = (sigmoid(z) - data.y[s]) / static_cast<double>(n);
      for (std::size_t i = 0; i < ni; ++i) gw[i] += err * data.x[s][i];
      gb += err;
    }
    for (std::size_t i = 0; i < ni; ++i) w_[i] -= cfg.learning_rate * gw[i];
    b_ -= cfg.learning_rate * gb;
  }
}

double LogisticRegression::score(const std::vector<double>& x) const {
  if (w_.empty()) throw std::logic_error("logreg not trained");
  double z = b_;
  for (std::size_t i = 0; i < w_.size(); ++i) z += w_[i] * x[i];
  return sigmoid(z);
}

}  // namespace avgps::ml
