#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "avgps/ml/detector.hpp"
#include "avgps/ml/eval.hpp"

using namespace avgps;
using namespace avgps::ml;

namespace {

FeatureRow row_from(const std::vector<double>& f, int label) {
  FeatureRow r;
  r.lat = f.size() > 0 ? f[0] : 0.0;
  r.lon = f.size() > 1 ? f[1] : 0.0;
  r.hdop = f.size() > 2 ? f[2] : 0.0;
  r.vdop = f.size() > 3 ? f[3] : 0.0;
  r.label = label;
  return r;
}

// Two well separated blobs in (lat, lon).
std::vector<FeatureRow> separable_set(int n, CounterRng& rng) {
  std::vector<FeatureRow> rows;
  for (int i = 0; i < n; ++i) {
    bool attack = i % 4 == 0;
    double cx = attack ? 4.0 : -4.0;
    rows.push_back(row_from({cx + rng.normal(0, 0.5), cx + rng.normal(0, 0.5)}, attack));
  }
  return rows;
}

// XOR pattern: same-sign quadrants normal, mixed-sign quadrants attack.
std::vector<FeatureRow> xor_set(int n, CounterRng& rng) {
  std::vector<FeatureRow> rows;
  for (int i = 0; i < n; ++i) {
    double a = rng.uniform(0.5, 1.5) * (rng.next_double() < 0.5 ? 1 : -1);
    double b = rng.uniform(0.5, 1.5) * (rng.next_double() < 0.5 ? 1 : -1);
    rows.push_back(row_from({a, b}, a * b < 0 ? 1 : 0));
  }
  return rows;
}

}  // namespace

TEST_CASE("decision tree separates a linearly separable set perfectly") {
  CounterRng rng(1, 1);
  auto rows = separable_set(400, rng);
  ModelSpec spec;
  spec.kind = ModelKind::DecisionTree;
  Detector d = train(rows, spec, 7);
  Metrics m = evaluate(d, rows, 0.5);
  CHECK(m.accuracy == 1.0);
  CHECK(m.f1 == 1.0);
}

TEST_CASE("training rejects single-class data") {
  CounterRng rng(2, 1);
  auto rows = separable_set(100, rng);
  for (auto& r : rows) r.label = 0;
  ModelSpec spec;
  CHECK_THROWS_AS(train(rows, spec, 7), DegenerateTraining);
}

TEST_CASE("mlp cracks the xor pattern") {
  CounterRng rng(3, 1);
  auto rows = xor_set(600, rng);
  ModelSpec spec;
  spec.kind = ModelKind::Mlp;
  spec.mlp.hidden = 16;
  spec.mlp.learning_rate = 0.1;
  spec.mlp.epochs = 400;
  Detector d = train(rows, spec, 11);
  Metrics m = evaluate(d, rows, 0.5);
  CHECK(m.accuracy > 0.95);
}

TEST_CASE("training determinism: same seed, identical serialization") {
  CounterRng rng(4, 1);
  auto rows = separable_set(300, rng);
  for (ModelKind kind : {ModelKind::DecisionTree, ModelKind::RandomForest, ModelKind::Mlp,
                         ModelKind::LogisticRegression}) {
    ModelSpec spec;
    spec.kind = kind;
    spec.mlp.epochs = 20;
    Detector a = train(rows, spec, 99);
    Detector b = train(rows, spec, 99);
    CHECK(a.serialize() == b.serialize());
  }
}

TEST_CASE("serialization round trip preserves scores") {
  CounterRng rng(5, 1);
  auto rows = separable_set(300, rng);
  auto probes = separable_set(50, rng);
  for (ModelKind kind : {ModelKind::DecisionTree, ModelKind::RandomForest, ModelKind::Mlp,
                         ModelKind::LogisticRegression}) {
    ModelSpec spec;
    spec.kind = kind;
    spec.mlp.epochs = 20;
    Detector d = train(rows, spec, 5);
    Detector back = Detector::deserialize(d.serialize());
    for (const auto& p : probes) CHECK(back.score(p) == d.score(p));
  }
}

TEST_CASE("scores stay in [0, 1] and the forest is the mean of its trees") {
  CounterRng rng(6, 1);
  auto rows = separable_set(400, rng);
  ModelSpec spec;
  spec.kind = ModelKind::RandomForest;
  spec.forest.n_trees = 12;
  Detector d = train(rows, spec, 3);
  for (int i = 0; i < 200; ++i) {
    FeatureRow probe = row_from({rng.normal(0, 4), rng.normal(0, 4)}, 0);
    double s = d.score(probe);
    CHECK(s >= 0.0);
    CHECK(s <= 1.0);
    auto f = feature_vector(probe);
    std::vector<double> raw(f.begin(), f.end());
    double acc = 0.0;
    for (const auto& t : d.forest().trees()) acc += t.score(raw);
    CHECK(s == doctest::Approx(acc / d.forest().trees().size()).epsilon(1e-12));
  }
}

TEST_CASE("a pure training leaf scores one") {
  CounterRng rng(7, 1);
  auto rows = separable_set(200, rng);
  ModelSpec spec;
  spec.kind = ModelKind::DecisionTree;
  Detector d = train(rows, spec, 1);
  for (const auto& r : rows)
    if (r.label == 1) CHECK(d.score(r) == 1.0);
}

TEST_CASE("classify: strict threshold semantics") {
  CounterRng rng(8, 1);
  auto rows = separable_set(200, rng);
  ModelSpec spec;
  spec.kind = ModelKind::DecisionTree;
  Detector d = train(rows, spec, 1);

  d.set_threshold(0.5);
  CHECK(d.classify_score(0.5) == Detector::Verdict::Normal);    // equality is normal
  CHECK(d.classify_score(0.500001) == Detector::Verdict::Abnormal);
  d.set_threshold(1.0);
  CHECK(d.classify_score(1.0) == Detector::Verdict::Normal);    // everything normal at T = 1
  d.set_threshold(0.0);
  CHECK(d.classify_score(0.0) == Detector::Verdict::Normal);
  CHECK_THROWS_AS(d.set_threshold(1.5), std::invalid_argument);
}

TEST_CASE("metrics arithmetic and brute-force recount oracle") {
  Metrics perfect = Metrics::from_counts(50, 0, 150, 0);
  CHECK(perfect.precision == 1.0);
  CHECK(perfect.recall == 1.0);
  CHECK(perfect.f1 == 1.0);

  Metrics m = Metrics::from_counts(9, 1, 0, 0);
  CHECK(m.precision == doctest::Approx(0.9));
  CHECK(m.recall == 1.0);
  CHECK(m.f1 == doctest::Approx(2 * 0.9 / 1.9));

  Metrics zero = Metrics::from_counts(0, 0, 10, 5);
  CHECK(zero.precision == 0.0);
  CHECK(zero.f1 == 0.0);

  // evaluate() against an independent recount on random predictions.
  CounterRng rng(9, 1);
  auto rows = separable_set(1000, rng);
  ModelSpec spec;
  spec.kind = ModelKind::LogisticRegression;
  spec.logreg.epochs = 60;
  Detector d = train(rows, spec, 2);
  double threshold = 0.4;
  Metrics got = evaluate(d, rows, threshold);
  long tp = 0, fp = 0, tn = 0, fn = 0;
  for (const auto& r : rows) {
    bool abnormal = d.score(r) > threshold;
    if (r.label && abnormal) ++tp;
    if (r.label && !abnormal) ++fn;
    if (!r.label && abnormal) ++fp;
    if (!r.label && !abnormal) ++tn;
  }
  CHECK(got.tp == tp);
  CHECK(got.fp == fp);
  CHECK(got.tn == tn);
  CHECK(got.fn == fn);
  CHECK(got.accuracy == doctest::Approx(static_cast<double>(tp + tn) / rows.size()));
  CHECK(got.fp_rate == doctest::Approx(static_cast<double>(fp) / (fp + tn)));
  CHECK(got.fn_rate == doctest::Approx(static_cast<double>(fn) / (fn + tp)));
}

TEST_CASE("stratified folds: exact division case") {
  std::vector<FeatureRow> rows;
  for (int i = 0; i < 100; ++i) rows.push_back(row_from({0.0, 0.0}, i < 25 ? 1 : 0));
  FoldPlan plan = stratified_folds(rows, 5, 42);
  REQUIRE(plan.folds.size() == 5);
  for (const auto& fold : plan.folds) {
    CHECK(fold.size() == 20);
    int attacks = 0;
    for (std::size_t idx : fold) attacks += rows[idx].label;
    CHECK(attacks == 5);
  }
}

TEST_CASE("stratified folds: disjoint cover and ratio bound on random configs") {
  CounterRng rng(10, 1);
  for (int trial = 0; trial < 100; ++trial) {
    int k = rng.uniform_int(2, 10);
    int n = rng.uniform_int(k * 4, 500);
    double ratio = rng.uniform(0.1, 0.9);
    std::vector<FeatureRow> rows;
    int positives = 0;
    for (int i = 0; i < n; ++i) {
      int label = rng.next_double() < ratio ? 1 : 0;
      positives += label;
      rows.push_back(row_from({0.0, 0.0}, label));
    }
    if (positives < k || n - positives < k) continue;

    FoldPlan plan = stratified_folds(rows, k, trial);
    std::set<std::size_t> seen;
    for (const auto& fold : plan.folds)
      for (std::size_t idx : fold) {
        CHECK(seen.count(idx) == 0);
        seen.insert(idx);
      }
    CHECK(seen.size() == rows.size());

    double global = static_cast<double>(positives) / n;
    for (const auto& fold : plan.folds) {
      int attacks = 0;
      for (std::size_t idx : fold) attacks += rows[idx].label;
      CHECK(std::fabs(attacks - global * fold.size()) <= 1.0 + 1e-9);
    }
  }
}

TEST_CASE("stratified folds: deterministic and guarded") {
  std::vector<FeatureRow> rows;
  for (int i = 0; i < 40; ++i) rows.push_back(row_from({0.0, 0.0}, i % 3 == 0 ? 1 : 0));
  FoldPlan a = stratified_folds(rows, 4, 7);
  FoldPlan b = stratified_folds(rows, 4, 7);
  CHECK(a.folds == b.folds);

  std::vector<FeatureRow> thin;
  for (int i = 0; i < 10; ++i) thin.push_back(row_from({0.0, 0.0}, i < 2 ? 1 : 0));
  CHECK_THROWS_AS(stratified_folds(thin, 5, 1), TooFewSamples);
}

TEST_CASE("threshold sweep: separated scores, monotonicity, recount oracle") {
  std::vector<double> normal, attack;
  CounterRng rng(11, 1);
  for (int i = 0; i < 400; ++i) normal.push_back(rng.uniform(0.0, 0.35));
  for (int i = 0; i < 150; ++i) attack.push_back(rng.uniform(0.55, 1.0));

  std::vector<std::pair<double, double>> margins{{0.4, 0.5}, {0.45, 0.5}, {0.4, 0.45}};
  SweepTable table = threshold_sweep(normal, attack, margins);
  REQUIRE(table.size() == 3);
  for (const SweepRow& row : table) {
    CHECK(row.normals_misclassified == 0);
    CHECK(row.attacks_misclassified == 0);
    CHECK(row.fp_rate == 0.0);
    CHECK(row.fn_rate == 0.0);
  }
  margins = {{0.4, 0.5}, {0.3, 0.5}, {0.4, 0.6}, {0.3, 0.6}};

  // Mixed scores: verify against direct enumeration and widening monotonicity.
  for (int i = 0; i < 100; ++i) normal.push_back(rng.uniform(0.0, 1.0));
  for (int i = 0; i < 100; ++i) attack.push_back(rng.uniform(0.0, 1.0));
  table = threshold_sweep(normal, attack, margins);
  for (const SweepRow& row : table) {
    long n_mis = 0, a_mis = 0;
    for (double s : normal) n_mis += s > row.margin_lo ? 1 : 0;
    for (double s : attack) a_mis += s < row.margin_hi ? 1 : 0;
    CHECK(row.normals_misclassified == n_mis);
    CHECK(row.attacks_misclassified == a_mis);
    CHECK(row.fp_rate == doctest::Approx(static_cast<double>(n_mis) / normal.size()));
    CHECK(row.fn_rate == doctest::Approx(static_cast<double>(a_mis) / attack.size()));
  }
  CHECK(table[1].normals_misclassified >= table[0].normals_misclassified);  // lower lo
  CHECK(table[2].attacks_misclassified >= table[0].attacks_misclassified);  // higher hi
  CHECK(table[3].normals_misclassified >= table[0].normals_misclassified);
  CHECK(table[3].attacks_misclassified >= table[0].attacks_misclassified);

  CHECK_THROWS_AS(threshold_sweep({}, attack, margins), std::invalid_argument);
}

TEST_CASE("detection latency and improvement") {
  CHECK(detection_latency({152.0}, 142.0) == 10.0);
  CHECK(latency_improvement(10.0, 23.0) == doctest::Approx(0.565217).epsilon(1e-4));
  CHECK(detection_latency({142.0}, 142.0) == 0.0);
  CHECK_FALSE(detection_latency({100.0}, 142.0).has_value());
  CHECK_FALSE(detection_latency({}, 142.0).has_value());
  // Alarms before the attack are ignored; the first at or after counts.
  CHECK(detection_latency({10.0, 150.0, 148.0, 200.0}, 142.0) == 6.0);
}

TEST_CASE("mlp analytic gradient matches central differences") {
  CounterRng rng(12, 1);
  for (int trial = 0; trial < 5; ++trial) {
    int inputs = rng.uniform_int(2, 5);
    MlpConfig cfg;
    cfg.hidden = rng.uniform_int(3, 8);
    Mlp net;
    net.init(inputs, cfg, 1000 + trial);
    // Nudge all parameters off their init for a generic point.
    for (auto& p : net.parameters()) p += rng.normal(0.0, 0.3);

    TrainSet batch;
    for (int s = 0; s < 12; ++s) {
      std::vector<double> x(inputs);
      for (double& v : x) v = rng.normal(0.0, 1.0);
      batch.x.push_back(x);
      batch.y.push_back(rng.next_double() < 0.5 ? 1 : 0);
    }

    std::vector<double> grad;
    net.loss_and_gradient(batch, &grad);
    const double h = 1e-6;
    for (std::size_t k = 0; k < net.parameters().size(); ++k) {
      double save = net.parameters()[k];
      net.parameters()[k] = save + h;
      double up = net.loss_and_gradient(batch, nullptr);
      net.parameters()[k] = save - h;
      double down = net.loss_and_gradient(batch, nullptr);
      net.parameters()[k] = save;
      double numeric = (up - down) / (2.0 * h);
      double denom = std::max({1.0, std::fabs(numeric), std::fabs(grad[k])});
      CHECK(std::fabs(numeric - grad[k]) / denom < 1e-5);
    }
  }
}

TEST_CASE("tree predictions invariant to positive feature scaling") {
  CounterRng rng(13, 1);
  auto rows = separable_set(500, rng);
  auto probes = separable_set(100, rng);

  for (ModelKind kind : {ModelKind::DecisionTree, ModelKind::RandomForest}) {
    ModelSpec spec;
    spec.kind = kind;
    Detector base = train(rows, spec, 21);

    // Scale one feature by an exact power of two in train and test alike.
    auto scaled_rows = rows;
    auto scaled_probes = probes;
    for (auto& r : scaled_rows) r.lon *= 1024.0;
    for (auto& r : scaled_probes) r.lon *= 1024.0;
    Detector scaled = train(scaled_rows, spec, 21);

    for (std::size_t i = 0; i < probes.size(); ++i) {
      bool a = base.classify(probes[i]) == Detector::Verdict::Abnormal;
      bool b = scaled.classify(scaled_probes[i]) == Detector::Verdict::Abnormal;
      CHECK(a == b);
    }
  }
}
