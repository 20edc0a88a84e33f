#include "frfacs/imbalance.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "frfacs/errors.hpp"

namespace frfacs {

ClassWeights global_weights(const std::vector<int>& labels, int num_classes) {
  if (labels.empty()) throw ArgumentError("global_weights: empty labels");
  std::vector<long> counts(num_classes, 0);
  for (int y : labels) {
    if (y < 0 || y >= num_classes) throw ArgumentError("global_weights: label out of range");
    ++counts[y];
  }
  const double n = static_cast<double>(labels.size());
  ClassWeights out;
  out.scheme = WeightScheme::global_inverse_frequency;
  out.weights.resize(num_classes);
  for (int k = 0; k < num_classes; ++k) {
    if (counts[k] == 0) {
      throw ArgumentError("global_weights: class " + std::to_string(k) +
                          " has zero frequency; restrict to present classes");
    }
    out.weights[k] = n / static_cast<double>(counts[k]);
  }
  return out;
}

ClassWeights node_weights(const std::vector<long>& counts, double epsilon) {
  if (!(epsilon > 0.0)) throw ArgumentError("node_weights: epsilon must be > 0");
  const long max_count = counts.empty() ? 0 : *std::max_element(counts.begin(), counts.end());
  if (max_count <= 0) throw ArgumentError("node_weights: all counts zero");
  ClassWeights out;
  out.scheme = WeightScheme::node_dynamic;
  out.weights.resize(counts.size());
  for (std::size_t k = 0; k < counts.size(); ++k) {
    out.weights[k] =
        static_cast<double>(max_count) / (static_cast<double>(counts[k]) + epsilon);
  }
  return out;
}

namespace {

double sq_euclidean(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

}  // namespace

SmoteResult functional_smote(const ScoreDataset& scores, const SmoteConfig& cfg,
                             Rng& rng) {
  if (!(cfg.target_ratio > 0.0 && cfg.target_ratio <= 1.0)) {
    throw ArgumentError("functional_smote: target_ratio must be in (0,1]");
  }
  if (cfg.k_neighbors < 1) {
    throw ArgumentError("functional_smote: k_neighbors must be >= 1");
  }

  SmoteResult res;
  res.data = scores;

  std::vector<long> counts(scores.num_classes, 0);
  for (int y : scores.labels) ++counts[y];

  // Minority = least frequent present class, lowest index on ties.
  int minority = -1, majority = -1;
  for (int k = 0; k < scores.num_classes; ++k) {
    if (counts[k] == 0) continue;
    if (minority < 0 || counts[k] < counts[minority]) minority = k;
    if (majority < 0 || counts[k] > counts[majority]) majority = k;
  }
  if (minority < 0) throw ArgumentError("functional_smote: no samples");
  res.minority_class = minority;

  if (counts[minority] < 2) {
    res.warnings.push_back("SMOTE skipped: minority class has fewer than 2 samples");
    return res;
  }

  std::vector<std::size_t> min_idx;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (scores.labels[i] == minority) min_idx.push_back(i);
  }

  int k_nn = cfg.k_neighbors;
  if (k_nn >= static_cast<long>(min_idx.size())) {
    k_nn = static_cast<int>(min_idx.size()) - 1;
    res.warnings.push_back("k_neighbors clipped to " + std::to_string(k_nn));
  }

  // Neighbor lists among minority rows; distance ties broken by lower index.
  std::vector<std::vector<std::size_t>> neighbors(min_idx.size());
  for (std::size_t a = 0; a < min_idx.size(); ++a) {
    std::vector<std::pair<double, std::size_t>> cand;
    for (std::size_t b = 0; b < min_idx.size(); ++b) {
      if (b == a) continue;
      cand.emplace_back(sq_euclidean(scores.scores[min_idx[a]], scores.scores[min_idx[b]]),
                        min_idx[b]);
    }
    std::sort(cand.begin(), cand.end());
    for (int j = 0; j < k_nn; ++j) neighbors[a].push_back(cand[j].second);
  }

  const double majority_count = static_cast<double>(counts[majority]);
  long minority_count = counts[minority];
  res.applied = true;
  while (static_cast<double>(minority_count) <
         cfg.target_ratio * majority_count) {
    const std::size_t a = rng.uniform_index(min_idx.size());
    const std::size_t b = rng.uniform_index(neighbors[a].size());
    const double lambda = rng.uniform();
    const auto& za = scores.scores[min_idx[a]];
    const auto& zb = scores.scores[neighbors[a][b]];
    std::vector<double> z(za.size());
    for (std::size_t m = 0; m < z.size(); ++m) {
      z[m] = za[m] + lambda * (zb[m] - za[m]);
    }
    res.data.scores.push_back(std::move(z));
    res.data.labels.push_back(minority);
    res.records.push_back(SmoteRecord{min_idx[a], neighbors[a][b], lambda});
    ++minority_count;
    ++res.synthetic_count;
  }
  return res;
}

std::vector<double> bootstrap_probabilities(const std::vector<int>& labels,
                                            int num_classes,
                                            std::vector<std::string>* warnings) {
  if (labels.empty()) throw ArgumentError("bootstrap_probabilities: empty labels");
  std::vector<long> counts(num_classes, 0);
  for (int y : labels) ++counts[y];
  int present = 0;
  for (long c : counts) present += (c > 0);
  std::vector<double> probs(labels.size());
  if (present < 2) {
    if (warnings) warnings->push_back("single class present; uniform bootstrap");
    std::fill(probs.begin(), probs.end(), 1.0 / static_cast<double>(labels.size()));
    return probs;
  }
  if (present < num_classes && warnings) {
    warnings->push_back("absent class ignored in bootstrap weighting");
  }
  // weight_i = 1/p_{y_i}; normalized this is 1/(present * n_{y_i}).
  for (std::size_t i = 0; i < labels.size(); ++i) {
    probs[i] = 1.0 / (static_cast<double>(present) *
                      static_cast<double>(counts[labels[i]]));
  }
  return probs;
}

}  // namespace frfacs
