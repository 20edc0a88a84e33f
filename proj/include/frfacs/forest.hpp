#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "frfacs/distance.hpp"
#include "frfacs/fpca.hpp"
#include "frfacs/imbalance.hpp"
#include "frfacs/tree.hpp"

namespace frfacs {

enum class Aggregation { majority_vote, probability_average };

struct ForestConfig {
  int n_trees = 300;
  TreeConfig tree;
  bool use_smote = true;
  SmoteConfig smote;
  bool use_cost_bootstrap = true;
  Aggregation aggregation = Aggregation::majority_vote;
  std::uint64_t seed = 0;
  FpcaSelector fpca = FpcaSelector::fixed(10);
};

struct ForestModel {
  FpcaModel fpca;
  std::vector<std::unique_ptr<TreeNode>> trees;
  ForestConfig config;
  int num_classes = 0;
  std::size_t smote_synthetic_count = 0;
  std::vector<std::string> warnings;
};

struct Prediction {
  std::vector<int> labels;
  std::vector<std::vector<double>> probabilities;  // rows sum to 1
};

// Algorithm: fit FPCA on the training curves, transform to scores, apply
// SMOTE once if enabled, then fit n_trees trees on per-tree bootstrap
// samples (cost-sensitive draw probabilities when enabled). Each tree uses a
// generator derived from (seed, tree index), so results do not depend on
// n_workers.
ForestModel fit_forest(const FunctionalDataset& data, const ForestConfig& cfg,
                       int n_workers = 1);

Prediction predict(const ForestModel& model, const FunctionalDataset& data);

// Fraction of trees in which samples i and j share a terminal node
// (threshold routing). Symmetric with unit diagonal.
std::vector<std::vector<double>> proximity_matrix(const ForestModel& model,
                                                  const FunctionalDataset& data);

enum class CurveMetric { l2, dtw };

// Majority label among the k nearest training curves. Distance ties go to
// the lower training index, vote ties to the lowest class index.
std::vector<int> fknn_baseline(const FunctionalDataset& train,
                               const FunctionalDataset& test, int k,
                               CurveMetric metric);

std::string forest_to_json(const ForestModel& model);
ForestModel forest_from_json(const std::string& text);

}  // namespace frfacs
