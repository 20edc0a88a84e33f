#pragma once

#include <json.hpp>

#include "frfacs/forest.hpp"

namespace frfacs {

// ADL hooks so nlohmann::json can (de)serialize the model configs. Missing
// keys keep the default value, so config files only list overrides.

NLOHMANN_JSON_SERIALIZE_ENUM(WeightScheme,
                             {{WeightScheme::uniform, "uniform"},
                              {WeightScheme::global_inverse_frequency, "global"},
                              {WeightScheme::node_dynamic, "node_dynamic"}})
NLOHMANN_JSON_SERIALIZE_ENUM(Routing, {{Routing::threshold, "threshold"},
                                       {Routing::prototype_distance,
                                        "prototype_distance"}})
NLOHMANN_JSON_SERIALIZE_ENUM(PrototypeMetric, {{PrototypeMetric::l2, "l2"},
                                               {PrototypeMetric::dtw, "dtw"}})
NLOHMANN_JSON_SERIALIZE_ENUM(Aggregation,
                             {{Aggregation::majority_vote, "majority_vote"},
                              {Aggregation::probability_average,
                               "probability_average"}})

inline void to_json(nlohmann::json& j, const SmoteConfig& c) {
  j = {{"target_ratio", c.target_ratio}, {"k_neighbors", c.k_neighbors}};
}
inline void from_json(const nlohmann::json& j, SmoteConfig& c) {
  c.target_ratio = j.value("target_ratio", c.target_ratio);
  c.k_neighbors = j.value("k_neighbors", c.k_neighbors);
}

inline void to_json(nlohmann::json& j, const TreeConfig& c) {
  j = nlohmann::json{{"min_samples_leaf", c.min_samples_leaf},
                     {"min_samples_split", c.min_samples_split},
                     {"mtry", c.mtry},
                     {"weight_scheme", c.weight_scheme},
                     {"epsilon", c.epsilon},
                     {"routing", c.routing},
                     {"prototype_metric", c.prototype_metric}};
  if (c.max_depth) j["max_depth"] = *c.max_depth;
}
inline void from_json(const nlohmann::json& j, TreeConfig& c) {
  if (j.contains("max_depth") && !j.at("max_depth").is_null()) {
    c.max_depth = j.at("max_depth").get<int>();
  }
  c.min_samples_leaf = j.value("min_samples_leaf", c.min_samples_leaf);
  c.min_samples_split = j.value("min_samples_split", c.min_samples_split);
  c.mtry = j.value("mtry", c.mtry);
  c.weight_scheme = j.value("weight_scheme", c.weight_scheme);
  c.epsilon = j.value("epsilon", c.epsilon);
  c.routing = j.value("routing", c.routing);
  c.prototype_metric = j.value("prototype_metric", c.prototype_metric);
}

inline void to_json(nlohmann::json& j, const FpcaSelector& s) {
  j = nlohmann::json::object();
  if (s.fixed_m) j["fixed_m"] = *s.fixed_m;
  if (s.variance_fraction) j["variance_fraction"] = *s.variance_fraction;
}
inline void from_json(const nlohmann::json& j, FpcaSelector& s) {
  if (j.contains("fixed_m")) s = FpcaSelector::fixed(j.at("fixed_m").get<int>());
  if (j.contains("variance_fraction")) {
    s = FpcaSelector::variance(j.at("variance_fraction").get<double>());
  }
}

inline void to_json(nlohmann::json& j, const ForestConfig& c) {
  j = nlohmann::json{{"n_trees", c.n_trees},
                     {"tree", c.tree},
                     {"use_smote", c.use_smote},
                     {"smote", c.smote},
                     {"use_cost_bootstrap", c.use_cost_bootstrap},
                     {"aggregation", c.aggregation},
                     {"seed", c.seed},
                     {"fpca", c.fpca}};
}
inline void from_json(const nlohmann::json& j, ForestConfig& c) {
  c.n_trees = j.value("n_trees", c.n_trees);
  if (j.contains("tree")) j.at("tree").get_to(c.tree);
  c.use_smote = j.value("use_smote", c.use_smote);
  if (j.contains("smote")) j.at("smote").get_to(c.smote);
  c.use_cost_bootstrap = j.value("use_cost_bootstrap", c.use_cost_bootstrap);
  c.aggregation = j.value("aggregation", c.aggregation);
  c.seed = j.value("seed", c.seed);
  if (j.contains("fpca")) j.at("fpca").get_to(c.fpca);
}

}  // namespace frfacs
