#pragma once

#include <array>
#include <string>
#include <variant>
#include <vector>

#include "avgps/ml/models.hpp"
#include "avgps/sim.hpp"

namespace avgps::ml {

struct DegenerateTraining : std::runtime_error {
  DegenerateTraining() : std::runtime_error("training set must contain both classes") {}
};

inline constexpr int kNumFeatures = 14;

// The 14 behavior-model features of a row, in schema order (timestamp and
// label excluded).
std::array<double, kNumFeatures> feature_vector(const FeatureRow& row);

enum class ModelKind { DecisionTree, RandomForest, Mlp, LogisticRegression };

const char* model_kind_name(ModelKind kind);
ModelKind model_kind_from_name(const std::string& name);

struct ModelSpec {
  ModelKind kind = ModelKind::Mlp;
  TreeConfig tree;
  ForestConfig forest;
  MlpConfig mlp;
  LogRegConfig logreg;
};

// Training-set z-score statistics; scale falls back to 1 for constant
// features. Applied to the gradient-trained models; trees consume raw values
// since ordered splits are scale-free.
struct Normalizer {
  std::vector<double> means;
  std::vector<double> scales;

  void fit(const std::vector<std::vector<double>>& x);
  std::vector<double> apply(const std::vector<double>& x) const;
};

// Trained anomaly scorer: model plus its memory (normalization statistics
// and parameters) and the alarm threshold.
class Detector {
 public:
  Detector() = default;

  // Abnormality score in [0, 1]; higher is more abnormal.
  double score(const FeatureRow& row) const;
  double score_features(const std::vector<double>& raw) const;

  enum class Verdict { Normal, Abnormal };
  Verdict classify(const FeatureRow& row) const { return classify_score(score(row)); }
  Verdict classify_score(double s) const;

  double threshold() const { return threshold_; }
  void set_threshold(double t);
  ModelKind kind() const { return spec_.kind; }
  const Normalizer& normalizer() const { return norm_; }

  std::string serialize() const;                      // versioned JSON text
  static Detector deserialize(const std::string& text);
  void save(const std::string& path) const;
  static Detector load(const std::string& path);

  friend Detector train(const std::vector<FeatureRow>& rows, const ModelSpec& spec,
                        std::uint64_t seed);

  const RandomForest& forest() const { return std::get<RandomForest>(model_); }
  const DecisionTree& tree() const { return std::get<DecisionTree>(model_); }
  const Mlp& mlp() const { return std::get<Mlp>(model_); }

 private:
  ModelSpec spec_;
  Normalizer norm_;
  std::variant<DecisionTree, RandomForest, Mlp, LogisticRegression> model_;
  double threshold_ = 0.5;
};

// Fits the normalizer and the requested model. Deterministic given the seed.
// Throws DegenerateTraining when a class is absent.
Detector train(const std::vector<FeatureRow>& rows, const ModelSpec& spec, std::uint64_t seed);

}  // namespace avgps::ml
