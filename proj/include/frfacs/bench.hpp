#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "frfacs/forest.hpp"
#include "frfacs/metrics.hpp"

namespace frfacs {

struct CvConfig {
  int folds = 10;
  int repeats = 1;
  std::uint64_t seed = 0;
  int workers = 1;
};

// Per-class round-robin fold assignment after a seeded shuffle; per-class
// fold sizes differ by at most one. Returns fold index per sample.
std::vector<int> stratified_folds(const std::vector<int>& labels, int k,
                                  std::uint64_t seed);

// Seed-stratified train/test split; returns train membership per sample.
std::vector<bool> stratified_split(const std::vector<int>& labels,
                                   double train_fraction, std::uint64_t seed);

struct ModelSpec {
  enum class Kind { forest, fknn } kind = Kind::forest;
  ForestConfig forest;
  int knn_k = 5;
  CurveMetric knn_metric = CurveMetric::l2;
};

struct MetricSummary {
  double mean = 0.0;
  double sd = 0.0;  // sample SD, (k-1) denominator
};

struct FoldInfo {
  int repeat = 0;
  int fold = 0;
  int minority_class = 0;
  std::size_t smote_synthetic_count = 0;
  double fpca_eigenvalue_sum = 0.0;  // training-fold FPCA fingerprint
};

struct CvResult {
  std::vector<MetricReport> fold_reports;  // repeats x folds, skipped folds omitted
  std::vector<FoldInfo> fold_info;
  std::map<std::string, MetricSummary> summary;
  std::vector<std::string> warnings;
};

// Repeated stratified CV. FPCA, SMOTE, and the forest are fitted strictly on
// the training folds; the held-out fold is only ever transformed and scored.
CvResult run_cv(const FunctionalDataset& data, const ModelSpec& model,
                const CvConfig& cv);

struct AblationVariant {
  std::string name;
  ForestConfig config;
  CvResult result;
};

struct AblationResult {
  std::vector<AblationVariant> variants;
  // Paired per-fold differences of each non-baseline variant minus the
  // baseline (variants[0]), keyed by metric name.
  std::map<std::string, std::vector<std::vector<double>>> paired_differences;
};

// Evaluates {plain RF, +dynamic weights, +SMOTE, full pipeline} under
// identical fold assignments and seeds.
AblationResult run_ablation(const FunctionalDataset& data,
                            const ForestConfig& base, const CvConfig& cv);

struct GridSpec {
  std::vector<int> n_trees = {100};
  std::vector<std::optional<int>> max_depth = {std::nullopt};
  std::vector<int> min_samples_leaf = {1};
  std::vector<int> fpca_m = {10};
  std::vector<double> smote_target_ratio = {0.5};
  std::vector<WeightScheme> weight_scheme = {WeightScheme::node_dynamic};
};

struct GridEntry {
  ForestConfig config;
  double minority_f1 = 0.0;  // inner-CV mean
  double auprc = 0.0;        // inner-CV mean (tie-break)
};

struct GridResult {
  ForestConfig best;
  std::vector<GridEntry> table;         // exhaustive, lexicographic order
  MetricReport held_out;                // best config refit on train, scored on test
  std::vector<std::string> warnings;
};

// 70/30-style protocol: seed-stratified split of `data` by `train_fraction`,
// inner CV on the training portion scoring minority F1 (tie-break AUPRC),
// then the winning config refit on the full training portion and evaluated
// on the held-out portion.
GridResult grid_search(const FunctionalDataset& data, const GridSpec& grid,
                       const CvConfig& cv, const ForestConfig& base,
                       double train_fraction = 0.7);

// Metric columns in fixed order, for reports and CSV rows.
std::vector<std::pair<std::string, double>> metric_values(const MetricReport& rep);

// Flat CSV: scenario,variant,repeat,fold,metric,value with deterministic
// number formatting.
std::string ablation_csv(const AblationResult& result, const std::string& scenario);
std::string cv_result_json(const CvResult& result);
std::string ablation_json(const AblationResult& result);

}  // namespace frfacs
