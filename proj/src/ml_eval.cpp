#include "avgps/ml/eval.hpp"

#include <algorithm>
#include <numeric>

namespace avgps::ml {

Metrics Metrics::from_counts(long tp, long fp, long tn, long fn) {
  Metrics m;
  m.tp = tp;
  m.fp = fp;
  m.tn = tn;
  m.fn = fn;
  long total = tp + fp + tn + fn;
  long positives = tp + fn;
  long negatives = tn + fp;
  m.accuracy = total > 0 ? static_cast<double>(tp + tn) / total : 0.0;
  m.precision = (tp + fp) > 0 ? static_cast<double>(tp) / (tp + fp) : 0.0;
  m.recall = positives > 0 ? static_cast<double>(tp) / positives : 0.0;
  m.f1 = (m.precision + m.recall) > 0.0
             ? 2.0 * m.precision * m.recall / (m.precision + m.recall)
             : 0.0;
  m.fp_rate = negatives > 0 ? static_cast<double>(fp) / negatives : 0.0;
  m.fn_rate = positives > 0 ? static_cast<double>(fn) / positives : 0.0;
  return m;
}

Metrics evaluate(const Detector& d, const std::vector<FeatureRow>& rows, double threshold) {
  long tp = 0, fp = 0, tn = 0, fn = 0;
  for (const FeatureRow& r : rows) {
    bool abnormal = d.score(r) > threshold;
    if (r.label) {
      abnormal ? ++tp : ++fn;
    } else {
      abnormal ? ++fp : ++tn;
    }
  }
  return Metrics::from_counts(tp, fp, tn, fn);
}

FoldPlan stratified_folds(const std::vector<FeatureRow>& rows, int k, std::uint64_t seed) {
  if (k < 2) throw std::invalid_argument("need at least two folds");
  std::vector<std::size_t> by_class[2];
  for (std::size_t i = 0; i < rows.size(); ++i) by_class[rows[i].label ? 1 : 0].push_back(i);
  for (int c = 0; c < 2; ++c)
    if (by_class[c].size() < static_cast<std::size_t>(k)) throw TooFewSamples();

  FoldPlan plan;
  plan.folds.assign(k, {});
  CounterRng rng(seed, 31);
  for (int c = 0; c < 2; ++c) {
    auto& idx = by_class[c];
    for (std::size_t i = idx.size(); i > 1; --i)
      std::swap(idx[i - 1], idx[rng.next_u64() % i]);
    for (std::size_t i = 0; i < idx.size(); ++i) plan.folds[i % k].push_back(idx[i]);
  }
  for (auto& fold : plan.folds) std::sort(fold.begin(), fold.end());
  return plan;
}

SweepTable threshold_sweep(const std::vector<double>& scores_normal,
                           const std::vector<double>& scores_attack,
                           const std::vector<std::pair<double, double>>& margins) {
  if (scores_normal.empty() || scores_attack.empty())
    throw std::invalid_argument("sweep needs scores from both classes");
  SweepTable table;
  for (auto [lo, hi] : margins) {
    SweepRow row;
    row.margin_lo = lo;
    row.margin_hi = hi;
    for (double s : scores_normal) row.normals_misclassified += s > lo ? 1 : 0;
    for (double s : scores_attack) row.attacks_misclassified += s < hi ? 1 : 0;
    row.fp_rate = static_cast<double>(row.normals_misclassified) / scores_normal.size();
    row.fn_rate = static_cast<double>(row.attacks_misclassified) / scores_attack.size();
    table.push_back(row);
  }
  return table;
}

std::optional<double> detection_latency(const std::vector<double>& alarm_times,
                                        double attack_start) {
  std::optional<double> first;
  for (double t : alarm_times)
    if (t >= attack_start && (!first || t < *first)) first = t;
  if (!first) return std::nullopt;
  return *first - attack_start;
}

double latency_improvement(double ml_latency, double baseline_latency) {
  if (baseline_latency == 0.0) throw std::invalid_argument("baseline latency must be nonzero");
  return (baseline_latency - ml_latency) / baseline_latency;
}

}  // namespace avgps::ml
