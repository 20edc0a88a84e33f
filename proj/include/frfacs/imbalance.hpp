#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "frfacs/fpca.hpp"
#include "frfacs/rng.hpp"

namespace frfacs {

enum class WeightScheme { uniform, global_inverse_frequency, node_dynamic };

struct ClassWeights {
  std::vector<double> weights;
  WeightScheme scheme = WeightScheme::uniform;
};

// w_k = 1 / freq(k). Throws if any class in [0, num_classes) is absent;
// callers must restrict to present classes.
ClassWeights global_weights(const std::vector<int>& labels, int num_classes);

// w_k = max_j n_j / (n_k + epsilon), from local node counts.
ClassWeights node_weights(const std::vector<long>& counts, double epsilon);

struct SmoteConfig {
  double target_ratio = 0.5;  // desired minority/majority count ratio, (0,1]
  int k_neighbors = 5;
};

struct SmoteRecord {
  std::size_t parent_a = 0;  // indices into the input score rows
  std::size_t parent_b = 0;
  double lambda = 0.0;
};

struct SmoteResult {
  ScoreDataset data;
  int minority_class = -1;
  std::size_t synthetic_count = 0;
  std::vector<SmoteRecord> records;
  std::vector<std::string> warnings;
  bool applied = false;
};

// Score-space SMOTE on the minority (least frequent) class: synthetic rows
// are convex interpolations z_a + lambda (z_b - z_a) between a minority row
// and one of its k nearest minority neighbors, appended until the
// minority/majority ratio reaches cfg.target_ratio. Train partitions only.
SmoteResult functional_smote(const ScoreDataset& scores, const SmoteConfig& cfg,
                             Rng& rng);

// Per-sample with-replacement draw probabilities proportional to the inverse
// class frequency, normalized to sum 1; expected class mass becomes uniform
// across present classes.
std::vector<double> bootstrap_probabilities(const std::vector<int>& labels,
                                            int num_classes,
                                            std::vector<std::string>* warnings = nullptr);

}  // namespace frfacs
