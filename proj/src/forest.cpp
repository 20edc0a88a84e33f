#include "frfacs/forest.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <numeric>
#include <thread>

#include "frfacs/config_json.hpp"
#include "frfacs/errors.hpp"

namespace frfacs {

namespace {

// Stream tags keep the SMOTE and per-tree generators disjoint.
constexpr std::uint64_t kSmoteStream = 0x534d4f5445ull;
constexpr std::uint64_t kTreeStream = 0x54524545ull;

int argmax_lowest(const std::vector<double>& v) {
  int best = 0;
  for (int k = 1; k < static_cast<int>(v.size()); ++k) {
    if (v[k] > v[best]) best = k;
  }
  return best;
}

std::vector<std::size_t> draw_bootstrap(const std::vector<double>* cum_probs,
                                        std::size_t n, Rng& rng) {
  std::vector<std::size_t> idx(n);
  if (!cum_probs) {
    for (auto& i : idx) i = rng.uniform_index(n);
  } else {
    for (auto& i : idx) {
      const double u = rng.uniform();
      const auto it = std::upper_bound(cum_probs->begin(), cum_probs->end(), u);
      i = std::min<std::size_t>(it - cum_probs->begin(), n - 1);
    }
  }
  return idx;
}

}  // namespace

ForestModel fit_forest(const FunctionalDataset& data, const ForestConfig& cfg,
                       int n_workers) {
  if (data.size() < 10) throw ArgumentError("fit_forest: need n >= 10");
  if (data.num_classes < 2) throw ArgumentError("fit_forest: need K >= 2 classes");
  if (cfg.n_trees < 1) throw ConfigError("fit_forest: n_trees must be >= 1");
  if (n_workers < 1) n_workers = 1;

  ForestModel model;
  model.config = cfg;
  model.num_classes = data.num_classes;
  model.fpca = fit_fpca(data, cfg.fpca);
  for (const auto& w : model.fpca.warnings()) model.warnings.push_back(w);
  if (model.fpca.eigenvalue_tail_sum(0) <= 0.0) {
    throw NumericError("fit_forest: degenerate FPCA (all eigenvalues zero)");
  }

  ScoreDataset scores = model.fpca.transform_all(data);
  if (cfg.use_smote) {
    Rng smote_rng(derive_seed(cfg.seed, kSmoteStream));
    SmoteResult sm = functional_smote(scores, cfg.smote, smote_rng);
    model.smote_synthetic_count = sm.synthetic_count;
    for (auto& w : sm.warnings) model.warnings.push_back("SMOTE: " + w);
    scores = std::move(sm.data);
  }

  std::vector<double> cum_probs;
  if (cfg.use_cost_bootstrap) {
    auto probs = bootstrap_probabilities(scores.labels, scores.num_classes,
                                         &model.warnings);
    cum_probs.resize(probs.size());
    std::partial_sum(probs.begin(), probs.end(), cum_probs.begin());
  }

  const std::size_t n = scores.size();
  model.trees.resize(cfg.n_trees);
  std::atomic<int> next_tree{0};
  std::atomic<bool> failed{false};
  std::string error_message;
  std::mutex error_mutex;

  auto worker = [&]() {
    for (;;) {
      const int t = next_tree.fetch_add(1);
      if (t >= cfg.n_trees || failed.load()) break;
      try {
        Rng rng(derive_seed(cfg.seed, kTreeStream, static_cast<std::uint64_t>(t)));
        const auto idx =
            draw_bootstrap(cfg.use_cost_bootstrap ? &cum_probs : nullptr, n, rng);
        ScoreDataset sample;
        sample.num_classes = scores.num_classes;
        sample.source = scores.source;
        sample.scores.reserve(n);
        sample.labels.reserve(n);
        for (std::size_t i : idx) {
          sample.scores.push_back(scores.scores[i]);
          sample.labels.push_back(scores.labels[i]);
        }
        model.trees[t] = fit_tree(sample, cfg.tree, rng);
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(error_mutex);
        failed.store(true);
        if (error_message.empty()) error_message = e.what();
      }
    }
  };

  if (n_workers == 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    for (int i = 0; i < n_workers; ++i) threads.emplace_back(worker);
    for (auto& th : threads) th.join();
  }
  if (failed.load()) throw Error("fit_forest: tree fitting failed: " + error_message);
  return model;
}

Prediction predict(const ForestModel& model, const FunctionalDataset& data) {
  require_same_grid(*data.grid, *model.fpca.grid(), "predict");
  const int k_classes = model.num_classes;
  const bool prototype = model.config.tree.routing == Routing::prototype_distance;

  // For prototype routing the per-leaf curves are query-independent;
  // reconstruct them once per tree.
  std::vector<std::vector<const TreeNode*>> leaves;
  std::vector<std::vector<Curve>> leaf_curves;
  if (prototype) {
    leaves.reserve(model.trees.size());
    leaf_curves.reserve(model.trees.size());
    for (const auto& tree : model.trees) {
      leaves.push_back(collect_leaves(*tree));
      std::vector<Curve> curves;
      curves.reserve(leaves.back().size());
      for (const TreeNode* leaf : leaves.back()) {
        curves.push_back(model.fpca.reconstruct(leaf->prototype_scores));
      }
      leaf_curves.push_back(std::move(curves));
    }
  }

  Prediction pred;
  pred.labels.reserve(data.size());
  pred.probabilities.reserve(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    const Curve query = data.curve_at(i);
    std::vector<double> query_scores;
    if (!prototype) query_scores = model.fpca.transform(query);

    std::vector<double> agg(k_classes, 0.0);
    for (std::size_t t = 0; t < model.trees.size(); ++t) {
      const std::vector<double>* dist;
      if (prototype) {
        std::size_t best = 0;
        double best_d = std::numeric_limits<double>::infinity();
        for (std::size_t l = 0; l < leaf_curves[t].size(); ++l) {
          const double d =
              model.config.tree.prototype_metric == PrototypeMetric::l2
                  ? l2_distance_sq(query, leaf_curves[t][l])
                  : dtw_distance(query, leaf_curves[t][l]);
          if (d < best_d) {
            best_d = d;
            best = l;
          }
        }
        dist = &leaves[t][best]->distribution;
      } else {
        dist = &route_by_threshold(*model.trees[t], query_scores).distribution;
      }
      if (model.config.aggregation == Aggregation::majority_vote) {
        agg[argmax_lowest(*dist)] += 1.0;
      } else {
        for (int k = 0; k < k_classes; ++k) agg[k] += (*dist)[k];
      }
    }
    const double total = static_cast<double>(model.trees.size());
    for (double& v : agg) v /= total;
    pred.labels.push_back(argmax_lowest(agg));
    pred.probabilities.push_back(std::move(agg));
  }
  return pred;
}

std::vector<std::vector<double>> proximity_matrix(const ForestModel& model,
                                                  const FunctionalDataset& data) {
  require_same_grid(*data.grid, *model.fpca.grid(), "proximity_matrix");
  const std::size_t n = data.size();
  std::vector<std::vector<double>> prox(n, std::vector<double>(n, 0.0));

  std::vector<std::vector<double>> scores(n);
  for (std::size_t i = 0; i < n; ++i) scores[i] = model.fpca.transform(data.curve_at(i));

  std::vector<const TreeNode*> leaf_of(n);
  for (const auto& tree : model.trees) {
    for (std::size_t i = 0; i < n; ++i) {
      leaf_of[i] = &route_by_threshold(*tree, scores[i]);
    }
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i; j < n; ++j) {
        if (leaf_of[i] == leaf_of[j]) {
          prox[i][j] += 1.0;
          if (j != i) prox[j][i] += 1.0;
        }
      }
    }
  }
  const double t = static_cast<double>(model.trees.size());
  for (auto& row : prox) {
    for (double& v : row) v /= t;
  }
  return prox;
}

std::vector<int> fknn_baseline(const FunctionalDataset& train,
                               const FunctionalDataset& test, int k,
                               CurveMetric metric) {
  if (train.size() == 0) throw ArgumentError("fknn_baseline: empty training set");
  if (k < 1 || static_cast<std::size_t>(k) > train.size()) {
    throw ArgumentError("fknn_baseline: k out of range");
  }
  require_same_grid(*train.grid, *test.grid, "fknn_baseline");

  std::vector<int> labels;
  labels.reserve(test.size());
  std::vector<std::pair<double, std::size_t>> dists(train.size());
  for (std::size_t q = 0; q < test.size(); ++q) {
    const Curve query = test.curve_at(q);
    for (std::size_t i = 0; i < train.size(); ++i) {
      const Curve tr = train.curve_at(i);
      const double d = metric == CurveMetric::l2 ? l2_distance_sq(query, tr)
                                                 : dtw_distance(query, tr);
      dists[i] = {d, i};
    }
    std::sort(dists.begin(), dists.end());
    std::vector<long> votes(train.num_classes, 0);
    for (int j = 0; j < k; ++j) ++votes[train.labels[dists[j].second]];
    int best = 0;
    for (int c = 1; c < train.num_classes; ++c) {
      if (votes[c] > votes[best]) best = c;
    }
    labels.push_back(best);
  }
  return labels;
}

std::string forest_to_json(const ForestModel& model) {
  nlohmann::json j;
  j["fpca"] = nlohmann::json::parse(model.fpca.to_json());
  j["config"] = model.config;
  j["num_classes"] = model.num_classes;
  j["smote_synthetic_count"] = model.smote_synthetic_count;
  j["warnings"] = model.warnings;
  auto& trees = j["trees"] = nlohmann::json::array();
  for (const auto& tree : model.trees) {
    trees.push_back(nlohmann::json::parse(tree_to_json(*tree)));
  }
  return j.dump();
}

ForestModel forest_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  ForestModel model;
  model.fpca = FpcaModel::from_json(j.at("fpca").dump());
  model.config = j.at("config").get<ForestConfig>();
  model.num_classes = j.at("num_classes").get<int>();
  model.smote_synthetic_count = j.at("smote_synthetic_count").get<std::size_t>();
  model.warnings = j.at("warnings").get<std::vector<std::string>>();
  for (const auto& t : j.at("trees")) {
    model.trees.push_back(tree_from_json(t.dump()));
  }
  return model;
}

}  // namespace frfacs
