#include "frfacs/tree.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <json.hpp>

#include "frfacs/distance.hpp"
#include "frfacs/errors.hpp"

namespace frfacs {

double weighted_gini(const std::vector<long>& counts, const ClassWeights& weights) {
  if (weights.weights.size() != counts.size()) {
    throw ArgumentError("weighted_gini: weight/count length mismatch");
  }
  long total = 0;
  for (long c : counts) total += c;
  if (total <= 0) throw ArgumentError("weighted_gini: empty node");
  double g = 0.0;
  for (std::size_t k = 0; k < counts.size(); ++k) {
    const double p = static_cast<double>(counts[k]) / static_cast<double>(total);
    g += weights.weights[k] * p * (1.0 - p);
  }
  return g;
}

double split_gain(const NodeStats& parent, const NodeStats& left,
                  const NodeStats& right, const ClassWeights& weights) {
  if (left.total + right.total != parent.total) {
    throw ArgumentError("split_gain: child totals inconsistent with parent");
  }
  const double n = static_cast<double>(parent.total);
  return weighted_gini(parent.counts, weights) -
         (static_cast<double>(left.total) / n) * weighted_gini(left.counts, weights) -
         (static_cast<double>(right.total) / n) * weighted_gini(right.counts, weights);
}

namespace {

constexpr double kMinGain = 1e-12;

struct Builder {
  const ScoreDataset& data;
  const TreeConfig& cfg;
  Rng& rng;
  int mtry;
  ClassWeights root_weights;  // used when scheme == global_inverse_frequency

  ClassWeights weights_for(const std::vector<long>& counts) const {
    switch (cfg.weight_scheme) {
      case WeightScheme::uniform: {
        ClassWeights w;
        w.scheme = WeightScheme::uniform;
        w.weights.assign(counts.size(), 1.0);
        return w;
      }
      case WeightScheme::global_inverse_frequency:
        return root_weights;
      case WeightScheme::node_dynamic:
        return node_weights(counts, cfg.epsilon);
    }
    throw ConfigError("unknown weight scheme");
  }

  std::unique_ptr<TreeNode> make_leaf(const std::vector<std::size_t>& idx,
                                      const std::vector<long>& counts) const {
    auto leaf = std::make_unique<TreeNode>();
    leaf->counts = counts;
    const double total = static_cast<double>(idx.size());
    leaf->distribution.resize(counts.size());
    for (std::size_t k = 0; k < counts.size(); ++k) {
      leaf->distribution[k] = static_cast<double>(counts[k]) / total;
    }
    leaf->prototype_scores.assign(data.dim(), 0.0);
    for (std::size_t i : idx) {
      for (std::size_t m = 0; m < data.dim(); ++m) {
        leaf->prototype_scores[m] += data.scores[i][m];
      }
    }
    for (double& v : leaf->prototype_scores) v /= total;
    return leaf;
  }

  std::unique_ptr<TreeNode> grow(std::vector<std::size_t> idx, int depth) {
    std::vector<long> counts(data.num_classes, 0);
    for (std::size_t i : idx) ++counts[data.labels[i]];

    const long n = static_cast<long>(idx.size());
    bool pure = false;
    for (long c : counts) pure = pure || (c == n);
    const bool depth_stop = cfg.max_depth && depth >= *cfg.max_depth;
    if (pure || depth_stop || n < cfg.min_samples_split) {
      return make_leaf(idx, counts);
    }

    const ClassWeights w = weights_for(counts);

    // Candidate feature subset, evaluated in ascending index order so ties
    // resolve to the lowest feature.
    std::vector<int> features(data.dim());
    std::iota(features.begin(), features.end(), 0);
    for (int j = 0; j < mtry; ++j) {
      const std::size_t pick = j + rng.uniform_index(features.size() - j);
      std::swap(features[j], features[pick]);
    }
    features.resize(mtry);
    std::sort(features.begin(), features.end());

    NodeStats parent{counts, n, depth};
    double best_gain = -1.0;
    int best_feature = -1;
    double best_threshold = 0.0;

    std::vector<std::size_t> order(idx);
    for (int f : features) {
      std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return data.scores[a][f] < data.scores[b][f];
      });
      std::vector<long> left_counts(data.num_classes, 0);
      for (long i = 1; i < n; ++i) {
        ++left_counts[data.labels[order[i - 1]]];
        const double lo = data.scores[order[i - 1]][f];
        const double hi = data.scores[order[i]][f];
        if (!(hi > lo)) continue;
        if (i < cfg.min_samples_leaf || n - i < cfg.min_samples_leaf) continue;
        std::vector<long> right_counts(data.num_classes);
        for (int k = 0; k < data.num_classes; ++k) {
          right_counts[k] = counts[k] - left_counts[k];
        }
        NodeStats ls{left_counts, i, depth + 1};
        NodeStats rs{std::move(right_counts), n - i, depth + 1};
        const double gain = split_gain(parent, ls, rs, w);
        if (gain > best_gain) {
          best_gain = gain;
          best_feature = f;
          best_threshold = 0.5 * (lo + hi);
        }
      }
    }

    if (best_feature < 0 || best_gain <= kMinGain) {
      return make_leaf(idx, counts);
    }

    std::vector<std::size_t> left_idx, right_idx;
    for (std::size_t i : idx) {
      if (data.scores[i][best_feature] <= best_threshold) {
        left_idx.push_back(i);
      } else {
        right_idx.push_back(i);
      }
    }

    auto node = std::make_unique<TreeNode>();
    node->feature = best_feature;
    node->threshold = best_threshold;
    node->counts = counts;
    node->left = grow(std::move(left_idx), depth + 1);
    node->right = grow(std::move(right_idx), depth + 1);
    return node;
  }
};

}  // namespace

std::unique_ptr<TreeNode> fit_tree(const ScoreDataset& scores,
                                   const TreeConfig& cfg, Rng& rng) {
  if (scores.size() == 0) throw ArgumentError("fit_tree: empty dataset");
  if (scores.num_classes < 2) throw ArgumentError("fit_tree: need K >= 2 classes");
  if (cfg.min_samples_leaf < 1) throw ConfigError("fit_tree: min_samples_leaf < 1");
  const int m = static_cast<int>(scores.dim());
  if (m < 1) throw ArgumentError("fit_tree: zero-dimensional scores");

  int mtry = cfg.mtry;
  if (mtry == 0) mtry = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(m))));
  if (mtry < 1 || mtry > m) throw ConfigError("fit_tree: mtry out of range");

  Builder b{scores, cfg, rng, mtry, {}};
  if (cfg.weight_scheme == WeightScheme::global_inverse_frequency) {
    // Inverse frequency over present classes; absent classes contribute
    // nothing to the impurity, so their weight is immaterial (set to 0).
    std::vector<long> counts(scores.num_classes, 0);
    for (int y : scores.labels) ++counts[y];
    b.root_weights.scheme = WeightScheme::global_inverse_frequency;
    b.root_weights.weights.resize(scores.num_classes, 0.0);
    const double n = static_cast<double>(scores.size());
    for (int k = 0; k < scores.num_classes; ++k) {
      if (counts[k] > 0) b.root_weights.weights[k] = n / static_cast<double>(counts[k]);
    }
  }

  std::vector<std::size_t> idx(scores.size());
  std::iota(idx.begin(), idx.end(), 0);
  return b.grow(std::move(idx), 0);
}

const TreeNode& route_by_threshold(const TreeNode& tree,
                                   const std::vector<double>& scores) {
  const TreeNode* node = &tree;
  while (!node->is_leaf()) {
    if (static_cast<std::size_t>(node->feature) >= scores.size()) {
      throw ArgumentError("route_by_threshold: score vector too short");
    }
    node = scores[node->feature] <= node->threshold ? node->left.get()
                                                    : node->right.get();
  }
  return *node;
}

std::vector<const TreeNode*> collect_leaves(const TreeNode& tree) {
  std::vector<const TreeNode*> out;
  std::vector<const TreeNode*> stack{&tree};
  while (!stack.empty()) {
    const TreeNode* node = stack.back();
    stack.pop_back();
    if (node->is_leaf()) {
      out.push_back(node);
    } else {
      stack.push_back(node->right.get());
      stack.push_back(node->left.get());
    }
  }
  return out;
}

const TreeNode& route_by_prototype(const TreeNode& tree, const Curve& query,
                                   const TreeConfig& cfg, const FpcaModel& model) {
  const auto leaves = collect_leaves(tree);
  const TreeNode* best = nullptr;
  double best_dist = std::numeric_limits<double>::infinity();
  for (const TreeNode* leaf : leaves) {
    const Curve proto = model.reconstruct(leaf->prototype_scores);
    const double d = cfg.prototype_metric == PrototypeMetric::l2
                         ? l2_distance_sq(query, proto)
                         : dtw_distance(query, proto);
    if (d < best_dist) {
      best_dist = d;
      best = leaf;
    }
  }
  return *best;
}

std::vector<double> predict_tree(const TreeNode& tree,
                                 const std::vector<double>& scores) {
  return route_by_threshold(tree, scores).distribution;
}

std::vector<double> predict_tree_curve(const TreeNode& tree, const Curve& query,
                                       const TreeConfig& cfg,
                                       const FpcaModel& model) {
  return route_by_prototype(tree, query, cfg, model).distribution;
}

namespace {

nlohmann::json node_to_json(const TreeNode& node) {
  nlohmann::json j;
  if (node.is_leaf()) {
    j["counts"] = node.counts;
    j["distribution"] = node.distribution;
    j["prototype_scores"] = node.prototype_scores;
  } else {
    j["feature"] = node.feature;
    j["threshold"] = node.threshold;
    j["counts"] = node.counts;
    j["left"] = node_to_json(*node.left);
    j["right"] = node_to_json(*node.right);
  }
  return j;
}

std::unique_ptr<TreeNode> node_from_json(const nlohmann::json& j) {
  auto node = std::make_unique<TreeNode>();
  node->counts = j.at("counts").get<std::vector<long>>();
  if (j.contains("feature")) {
    node->feature = j.at("feature").get<int>();
    node->threshold = j.at("threshold").get<double>();
    node->left = node_from_json(j.at("left"));
    node->right = node_from_json(j.at("right"));
  } else {
    node->distribution = j.at("distribution").get<std::vector<double>>();
    node->prototype_scores = j.at("prototype_scores").get<std::vector<double>>();
  }
  return node;
}

}  // namespace

std::string tree_to_json(const TreeNode& tree) { return node_to_json(tree).dump(); }

std::unique_ptr<TreeNode> tree_from_json(const std::string& text) {
  return node_from_json(nlohmann::json::parse(text));
}

}  // namespace frfacs
