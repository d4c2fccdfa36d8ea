#include "avgps/ml/detector.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace avgps::ml {

using nlohmann::json;

std::array<double, kNumFeatures> feature_vector(const FeatureRow& row) {
  return {row.lat,
          row.lon,
          row.hdop,
          row.vdop,
          static_cast<double>(row.sat_lock),
          static_cast<double>(row.sat_count),
          row.e,
          row.delta,
          row.x,
          row.y,
          row.psi,
          row.vx,
          row.vy,
          row.r};
}

const char* model_kind_name(ModelKind kind) {
  switch (kind) {
    case ModelKind::DecisionTree: return "dt";
    case ModelKind::RandomForest: return "rf";
    case ModelKind::Mlp: return "mlp";
    case ModelKind::LogisticRegression: return "lr";
  }
  return "?";
}

ModelKind model_kind_from_name(const std::string& name) {
  if (name == "dt") return ModelKind::DecisionTree;
  if (name == "rf") return ModelKind::RandomForest;
  if (name == "mlp") return ModelKind::Mlp;
  if (name == "lr") return ModelKind::LogisticRegression;
  throw std::invalid_argument("unknown model kind: " + name);
}

void Normalizer::fit(const std::vector<std::vector<double>>& x) {
  const std::size_t d = x.empty() ? 0 : x[0].size();
  means.assign(d, 0.0);
  scales.assign(d, 1.0);
  if (x.empty()) return;
  for (const auto& row : x)
    for (std::size_t i = 0; i < d; ++i) means[i] += row[i];
  for (std::size_t i = 0; i < d; ++i) means[i] /= static_cast<double>(x.size());
  std::vector<double> var(d, 0.0);
  for (const auto& row : x)
    for (std::size_t i = 0; i < d; ++i) var[i] += (row[i] - means[i]) * (row[i] - means[i]);
  for (std::size_t i = 0; i < d; ++i) {
    double s = std::sqrt(var[i] / static_cast<double>(x.size()));
    scales[i] = s > 1e-12 ? s : 1.0;
  }
}

std::vector<double> Normalizer::apply(const std::vector<double>& x) const {
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = (x[i] - means[i]) / scales[i];
  return out;
}

Detector train(const std::vector<FeatureRow>& rows, const ModelSpec& spec, std::uint64_t seed) {
  TrainSet data;
  data.x.reserve(rows.size());
  data.y.reserve(rows.size());
  long positives = 0;
  for (const FeatureRow& r : rows) {
    auto f = feature_vector(r);
    for (double v : f)
      if (!std::isfinite(v)) throw std::invalid_argument("non-finite feature value");
    data.x.emplace_back(f.begin(), f.end());
    data.y.push_back(r.label ? 1 : 0);
    positives += r.label ? 1 : 0;
  }
  if (positives == 0 || positives == static_cast<long>(rows.size())) throw DegenerateTraining();

  Detector d;
  d.spec_ = spec;
  d.norm_.fit(data.x);

  switch (spec.kind) {
    case ModelKind::DecisionTree: {
      DecisionTree t;
      t.fit(data, spec.tree, seed);
      d.model_ = std::move(t);
      break;
    }
    case ModelKind::RandomForest: {
      RandomForest f;
      f.fit(data, spec.forest, seed);
      d.model_ = std::move(f);
      break;
    }
    case ModelKind::Mlp: {
      TrainSet scaled;
      scaled.y = data.y;
      scaled.x.reserve(data.x.size());
      for (const auto& row : data.x) scaled.x.push_back(d.norm_.apply(row));
      Mlp m;
      m.fit(scaled, spec.mlp, seed);
      d.model_ = std::move(m);
      break;
    }
    case ModelKind::LogisticRegression: {
      TrainSet scaled;
      scaled.y = data.y;
      scaled.x.reserve(data.x.size());
      for (const auto& row : data.x) scaled.x.push_back(d.norm_.apply(row));
      LogisticRegression m;
      m.fit(scaled, spec.logreg);
      d.model_ = std::move(m);
      break;
    }
  }
  return d;
}

double Detector::score_features(const std::vector<double>& raw) const {
  switch (spec_.kind) {
    case ModelKind::DecisionTree: return std::get<DecisionTree>(model_).score(raw);
    case ModelKind::RandomForest: return std::get<RandomForest>(model_).score(raw);
    case ModelKind::Mlp: return std::get<Mlp>(model_).score(norm_.apply(raw));
    case ModelKind::LogisticRegression:
      return std::get<LogisticRegression>(model_).score(norm_.apply(raw));
  }
  return 0.0;
}

double Detector::score(const FeatureRow& row) const {
  auto f = feature_vector(row);
  return score_features(std::vector<double>(f.begin(), f.end()));
}

Detector::Verdict Detector::classify_score(double s) const {
  return s > threshold_ ? Verdict::Abnormal : Verdict::Normal;
}

void Detector::set_threshold(double t) {
  if (!(t >= 0.0 && t <= 1.0)) throw std::invalid_argument("threshold must be in [0, 1]");
  threshold_ = t;
}

namespace {

json tree_to_json(const DecisionTree& t) {
  json nodes = json::array();
  for (const auto& n : t.nodes())
    nodes.push_back({n.feature, n.threshold, n.left, n.right, n.value});
  return nodes;
}

std::vector<DecisionTree::Node> tree_nodes_from_json(const json& j) {
  std::vector<DecisionTree::Node> nodes;
  for (const auto& e : j) {
    DecisionTree::Node n;
    n.feature = e[0].get<int>();
    n.threshold = e[1].get<double>();
    n.left = e[2].get<int>();
    n.right = e[3].get<int>();
    n.value = e[4].get<double>();
    nodes.push_back(n);
  }
  return nodes;
}

}  // namespace

std::string Detector::serialize() const {
  json j;
  j["format_version"] = 1;
  j["model"] = model_kind_name(spec_.kind);
  j["threshold"] = threshold_;
  j["norm"] = {{"means", norm_.means}, {"scales", norm_.scales}};
  switch (spec_.kind) {
    case ModelKind::DecisionTree:
      j["params"] = {{"nodes", tree_to_json(std::get<DecisionTree>(model_))}};
      break;
    case ModelKind::RandomForest: {
      json trees = json::array();
      for (const auto& t : std::get<RandomForest>(model_).trees())
        trees.push_back(tree_to_json(t));
      j["params"] = {{"trees", trees}};
      break;
    }
    case ModelKind::Mlp: {
      const Mlp& m = std::get<Mlp>(model_);
      j["params"] = {{"inputs", m.n_inputs()}, {"hidden", m.n_hidden()},
                     {"weights", m.parameters()}};
      break;
    }
    case ModelKind::LogisticRegression: {
      const LogisticRegression& m = std::get<LogisticRegression>(model_);
      j["params"] = {{"weights", m.weights()}, {"bias", m.bias()}};
      break;
    }
  }
  return j.dump(2);
}

Detector Detector::deserialize(const std::string& text) {
  json j = json::parse(text);
  if (j.at("format_version").get<int>() != 1)
    throw std::runtime_error("unsupported detector format version");
  Detector d;
  d.spec_.kind = model_kind_from_name(j.at("model").get<std::string>());
  d.threshold_ = j.at("threshold").get<double>();
  d.norm_.means = j.at("norm").at("means").get<std::vector<double>>();
  d.norm_.scales = j.at("norm").at("scales").get<std::vector<double>>();
  const json& p = j.at("params");
  switch (d.spec_.kind) {
    case ModelKind::DecisionTree: {
      DecisionTree t;
      t.restore(tree_nodes_from_json(p.at("nodes")));
      d.model_ = std::move(t);
      break;
    }
    case ModelKind::RandomForest: {
      RandomForest f;
      std::vector<std::vector<DecisionTree::Node>> trees;
      for (const auto& tj : p.at("trees")) trees.push_back(tree_nodes_from_json(tj));
      f.restore(trees);
      d.model_ = std::move(f);
      break;
    }
    case ModelKind::Mlp: {
      Mlp m;
      MlpConfig cfg;
      cfg.hidden = p.at("hidden").get<int>();
      m.init(p.at("inputs").get<int>(), cfg, 0);
      m.parameters() = p.at("weights").get<std::vector<double>>();
      d.model_ = std::move(m);
      break;
    }
    case ModelKind::LogisticRegression: {
      LogisticRegression m;
      m.weights() = p.at("weights").get<std::vector<double>>();
      m.bias() = p.at("bias").get<double>();
      d.model_ = std::move(m);
      break;
    }
  }
  return d;
}

void Detector::save(const std::string& path) const {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open for write: " + path);
  f << serialize();
}

Detector Detector::load(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open for read: " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return deserialize(ss.str());
}

}  // namespace avgps::ml
