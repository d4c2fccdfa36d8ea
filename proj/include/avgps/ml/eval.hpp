#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "avgps/ml/detector.hpp"

namespace avgps::ml {

struct TooFewSamples : std::runtime_error {
  TooFewSamples() : std::runtime_error("every class needs at least k samples") {}
};

// Confusion counts and the derived rates. Zero denominators yield zero.
struct Metrics {
  long tp = 0, fp = 0, tn = 0, fn = 0;
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double fp_rate = 0.0;
  double fn_rate = 0.0;

  static Metrics from_counts(long tp, long fp, long tn, long fn);
};

Metrics evaluate(const Detector& d, const std::vector<FeatureRow>& rows, double threshold);

// Stratified k-fold assignment: per class, a seeded shuffle dealt
// round-robin, so per-fold class counts stay within one of proportional.
struct FoldPlan {
  std::vector<std::vector<std::size_t>> folds;
};

FoldPlan stratified_folds(const std::vector<FeatureRow>& rows, int k, std::uint64_t seed);

// One row of the margin analysis: thresholds inside [lo, hi] misclassify
// the normals scoring above lo and the attacks scoring below hi.
struct SweepRow {
  double margin_lo = 0.0;
  double margin_hi = 0.0;
  long normals_misclassified = 0;
  long attacks_misclassified = 0;
  double fp_rate = 0.0;
  double fn_rate = 0.0;
};

using SweepTable = std::vector<SweepRow>;

SweepTable threshold_sweep(const std::vector<double>& scores_normal,
                           const std::vector<double>& scores_attack,
                           const std::vector<std::pair<double, double>>& margins);

// Seconds from attack onset to the first alarm at or after it; empty when no
// such alarm exists.
std::optional<double> detection_latency(const std::vector<double>& alarm_times,
                                        double attack_start);

// Fractional speedup of the faster detector over the baseline.
double latency_improvement(double ml_latency, double baseline_latency);

}  // namespace avgps::ml
