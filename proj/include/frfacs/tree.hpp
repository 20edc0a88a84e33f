#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "frfacs/fpca.hpp"
#include "frfacs/imbalance.hpp"
#include "frfacs/rng.hpp"

namespace frfacs {

enum class Routing { threshold, prototype_distance };
enum class PrototypeMetric { l2, dtw };

struct TreeConfig {
  std::optional<int> max_depth;
  int min_samples_leaf = 1;
  int min_samples_split = 2;
  int mtry = 0;  // 0 means ceil(sqrt(M))
  WeightScheme weight_scheme = WeightScheme::node_dynamic;
  double epsilon = 1e-6;
  Routing routing = Routing::threshold;
  PrototypeMetric prototype_metric = PrototypeMetric::l2;
};

struct NodeStats {
  std::vector<long> counts;
  long total = 0;
  int depth = 0;
};

struct TreeNode {
  // Split fields; feature < 0 marks a leaf.
  int feature = -1;
  double threshold = 0.0;
  std::unique_ptr<TreeNode> left;
  std::unique_ptr<TreeNode> right;
  // Leaf fields.
  std::vector<long> counts;
  std::vector<double> distribution;       // sums to 1
  std::vector<double> prototype_scores;   // mean score vector of members

  bool is_leaf() const { return feature < 0; }
};

// G* = sum_k w_k p_k (1 - p_k).
double weighted_gini(const std::vector<long>& counts, const ClassWeights& weights);

// Impurity decrease of a candidate split under a single fixed weight vector
// applied to parent and both children; non-negative up to round-off.
double split_gain(const NodeStats& parent, const NodeStats& left,
                  const NodeStats& right, const ClassWeights& weights);

// CART growth on score vectors with the configured weight scheme. Candidate
// thresholds are midpoints of consecutive distinct sorted feature values;
// ties resolve to the lowest feature index, then the lowest threshold.
std::unique_ptr<TreeNode> fit_tree(const ScoreDataset& scores,
                                   const TreeConfig& cfg, Rng& rng);

// Threshold routing: descend by feature comparisons (<= goes left).
const TreeNode& route_by_threshold(const TreeNode& tree,
                                   const std::vector<double>& scores);

// Prototype routing: the leaf whose reconstructed prototype curve is closest
// to the query under the configured curve distance.
const TreeNode& route_by_prototype(const TreeNode& tree, const Curve& query,
                                   const TreeConfig& cfg, const FpcaModel& model);

std::vector<double> predict_tree(const TreeNode& tree,
                                 const std::vector<double>& scores);
std::vector<double> predict_tree_curve(const TreeNode& tree, const Curve& query,
                                       const TreeConfig& cfg,
                                       const FpcaModel& model);

// Leaves in depth-first left-to-right order.
std::vector<const TreeNode*> collect_leaves(const TreeNode& tree);

std::string tree_to_json(const TreeNode& tree);
std::unique_ptr<TreeNode> tree_from_json(const std::string& text);

}  // namespace frfacs
