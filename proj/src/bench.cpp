#include "frfacs/bench.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "frfacs/config_json.hpp"
#include "frfacs/errors.hpp"
#include "frfacs/rng.hpp"

namespace frfacs {

namespace {

constexpr std::uint64_t kFoldStream = 0xF01D5ull;
constexpr std::uint64_t kFitStream = 0x5EED5ull;
constexpr std::uint64_t kSplitStream = 0x57115ull;

FunctionalDataset subset(const FunctionalDataset& data,
                         const std::vector<std::size_t>& idx) {
  std::vector<std::vector<double>> curves;
  std::vector<int> labels;
  curves.reserve(idx.size());
  labels.reserve(idx.size());
  for (std::size_t i : idx) {
    curves.push_back(data.curves[i]);
    labels.push_back(data.labels[i]);
  }
  return make_dataset(data.grid, std::move(curves), std::move(labels),
                      data.num_classes, data.label_names);
}

int least_frequent_class(const std::vector<int>& labels, int num_classes) {
  std::vector<long> counts(num_classes, 0);
  for (int y : labels) ++counts[y];
  int best = -1;
  for (int k = 0; k < num_classes; ++k) {
    if (counts[k] == 0) continue;
    if (best < 0 || counts[k] < counts[best]) best = k;
  }
  return best;
}

int present_classes(const std::vector<int>& labels, int num_classes) {
  std::vector<bool> seen(num_classes, false);
  for (int y : labels) seen[y] = true;
  int n = 0;
  for (bool s : seen) n += s;
  return n;
}

std::string format_value(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

}  // namespace

std::vector<int> stratified_folds(const std::vector<int>& labels, int k,
                                  std::uint64_t seed) {
  if (k < 2) throw ArgumentError("stratified_folds: k must be >= 2");
  if (static_cast<std::size_t>(k) > labels.size()) {
    throw ArgumentError("stratified_folds: k exceeds sample count");
  }
  int num_classes = 0;
  for (int y : labels) num_classes = std::max(num_classes, y + 1);

  std::vector<int> fold(labels.size(), -1);
  for (int c = 0; c < num_classes; ++c) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (labels[i] == c) idx.push_back(i);
    }
    if (idx.empty()) continue;
    Rng rng(derive_seed(seed, kFoldStream, static_cast<std::uint64_t>(c)));
    rng.shuffle(idx);
    for (std::size_t j = 0; j < idx.size(); ++j) {
      fold[idx[j]] = static_cast<int>(j % static_cast<std::size_t>(k));
    }
  }
  return fold;
}

std::vector<bool> stratified_split(const std::vector<int>& labels,
                                   double train_fraction, std::uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw ArgumentError("stratified_split: train fraction must be in (0,1)");
  }
  int num_classes = 0;
  for (int y : labels) num_classes = std::max(num_classes, y + 1);

  std::vector<bool> in_train(labels.size(), false);
  for (int c = 0; c < num_classes; ++c) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (labels[i] == c) idx.push_back(i);
    }
    if (idx.empty()) continue;
    Rng rng(derive_seed(seed, kSplitStream, static_cast<std::uint64_t>(c)));
    rng.shuffle(idx);
    std::size_t n_train = static_cast<std::size_t>(
        std::floor(train_fraction * static_cast<double>(idx.size())));
    if (n_train == 0) n_train = 1;
    if (n_train == idx.size()) n_train = idx.size() - 1;
    for (std::size_t j = 0; j < n_train; ++j) in_train[idx[j]] = true;
  }
  return in_train;
}

std::vector<std::pair<std::string, double>> metric_values(const MetricReport& rep) {
  std::vector<std::pair<std::string, double>> out = {
      {"macro_f1", rep.macro_f1},
      {"minority_f1", rep.minority_f1},
      {"balanced_accuracy", rep.balanced_accuracy},
      {"g_mean", rep.g_mean},
      {"mcc", rep.mcc},
      {"type_i_rate", rep.type_i_rate},
      {"type_ii_rate", rep.type_ii_rate},
  };
  if (rep.auprc) out.emplace_back("auprc", *rep.auprc);
  return out;
}

CvResult run_cv(const FunctionalDataset& data, const ModelSpec& model,
                const CvConfig& cv) {
  if (cv.folds < 2) throw ArgumentError("run_cv: folds must be >= 2");
  if (cv.repeats < 1) throw ArgumentError("run_cv: repeats must be >= 1");

  CvResult res;
  for (int r = 0; r < cv.repeats; ++r) {
    const auto fold =
        stratified_folds(data.labels, cv.folds,
                         derive_seed(cv.seed, kFoldStream, static_cast<std::uint64_t>(r)));
    for (int f = 0; f < cv.folds; ++f) {
      std::vector<std::size_t> train_idx, test_idx;
      for (std::size_t i = 0; i < data.size(); ++i) {
        (fold[i] == f ? test_idx : train_idx).push_back(i);
      }
      if (test_idx.empty()) {
        res.warnings.push_back("repeat " + std::to_string(r) + " fold " +
                               std::to_string(f) + " skipped: empty test fold");
        continue;
      }
      const FunctionalDataset train = subset(data, train_idx);
      if (present_classes(train.labels, data.num_classes) < 2) {
        res.warnings.push_back("repeat " + std::to_string(r) + " fold " +
                               std::to_string(f) +
                               " skipped: single class in training fold");
        continue;
      }
      const FunctionalDataset test = subset(data, test_idx);
      const int minority = least_frequent_class(train.labels, data.num_classes);

      FoldInfo info;
      info.repeat = r;
      info.fold = f;
      info.minority_class = minority;

      std::vector<int> pred_labels;
      std::vector<double> minority_scores;
      bool have_scores = false;
      if (model.kind == ModelSpec::Kind::forest) {
        ForestConfig cfg = model.forest;
        cfg.seed = derive_seed(cv.seed, kFitStream, static_cast<std::uint64_t>(r),
                               static_cast<std::uint64_t>(f));
        const ForestModel forest = fit_forest(train, cfg, cv.workers);
        info.smote_synthetic_count = forest.smote_synthetic_count;
        info.fpca_eigenvalue_sum = forest.fpca.eigenvalue_tail_sum(0);
        Prediction pred = predict(forest, test);
        pred_labels = std::move(pred.labels);
        const bool test_has_minority =
            std::find(test.labels.begin(), test.labels.end(), minority) !=
            test.labels.end();
        if (data.num_classes == 2 && test_has_minority) {
          minority_scores.reserve(test.size());
          for (const auto& row : pred.probabilities) {
            minority_scores.push_back(row[minority]);
          }
          have_scores = true;
        }
      } else {
        int k = model.knn_k;
        if (static_cast<std::size_t>(k) > train.size()) {
          k = static_cast<int>(train.size());
          res.warnings.push_back("fKNN k clipped to training size");
        }
        pred_labels = fknn_baseline(train, test, k, model.knn_metric);
      }

      const ConfusionMatrix cm =
          confusion(test.labels, pred_labels, data.num_classes);
      res.fold_reports.push_back(report(cm, minority,
                                        have_scores ? &test.labels : nullptr,
                                        have_scores ? &minority_scores : nullptr));
      res.fold_info.push_back(info);
    }
  }

  // Mean and (k-1)-denominator sample SD per metric.
  std::map<std::string, std::vector<double>> columns;
  for (const auto& rep : res.fold_reports) {
    for (const auto& [name, value] : metric_values(rep)) {
      columns[name].push_back(value);
    }
  }
  for (const auto& [name, vals] : columns) {
    MetricSummary s;
    const double n = static_cast<double>(vals.size());
    for (double v : vals) s.mean += v;
    s.mean /= n;
    if (vals.size() > 1) {
      double ss = 0.0;
      for (double v : vals) ss += (v - s.mean) * (v - s.mean);
      s.sd = std::sqrt(ss / (n - 1.0));
    }
    res.summary[name] = s;
  }
  return res;
}

AblationResult run_ablation(const FunctionalDataset& data,
                            const ForestConfig& base, const CvConfig& cv) {
  AblationResult out;

  auto variant = [&](const std::string& name, WeightScheme scheme, bool smote,
                     bool cost_bootstrap) {
    ForestConfig cfg = base;
    cfg.tree.weight_scheme = scheme;
    cfg.use_smote = smote;
    cfg.use_cost_bootstrap = cost_bootstrap;
    ModelSpec spec;
    spec.kind = ModelSpec::Kind::forest;
    spec.forest = cfg;
    out.variants.push_back(AblationVariant{name, cfg, run_cv(data, spec, cv)});
  };

  variant("plain_rf", WeightScheme::uniform, false, false);
  variant("dynamic_weights", WeightScheme::node_dynamic, false, false);
  variant("smote", WeightScheme::uniform, true, false);
  variant("frf_acs_full", WeightScheme::node_dynamic, true, true);

  const auto& baseline = out.variants[0].result.fold_reports;
  for (std::size_t v = 1; v < out.variants.size(); ++v) {
    const auto& reports = out.variants[v].result.fold_reports;
    if (reports.size() != baseline.size()) continue;  // mismatched skips
    for (std::size_t i = 0; i < reports.size(); ++i) {
      const auto base_vals = metric_values(baseline[i]);
      const auto var_vals = metric_values(reports[i]);
      for (std::size_t m = 0; m < std::min(base_vals.size(), var_vals.size()); ++m) {
        if (base_vals[m].first != var_vals[m].first) continue;
        auto& per_variant = out.paired_differences[base_vals[m].first];
        per_variant.resize(out.variants.size() - 1);
        per_variant[v - 1].push_back(var_vals[m].second - base_vals[m].second);
      }
    }
  }
  return out;
}

GridResult grid_search(const FunctionalDataset& data, const GridSpec& grid,
                       const CvConfig& cv, const ForestConfig& base,
                       double train_fraction) {
  if (grid.n_trees.empty() || grid.max_depth.empty() ||
      grid.min_samples_leaf.empty() || grid.fpca_m.empty() ||
      grid.smote_target_ratio.empty() || grid.weight_scheme.empty()) {
    throw ArgumentError("grid_search: empty grid value list");
  }

  const auto in_train = stratified_split(data.labels, train_fraction,
                                         derive_seed(cv.seed, kSplitStream));
  std::vector<std::size_t> train_idx, test_idx;
  for (std::size_t i = 0; i < data.size(); ++i) {
    (in_train[i] ? train_idx : test_idx).push_back(i);
  }
  const FunctionalDataset train = subset(data, train_idx);
  const FunctionalDataset test = subset(data, test_idx);

  GridResult res;
  bool have_best = false;
  double best_f1 = 0.0, best_auprc = 0.0;

  // Exhaustive lexicographic iteration over the declared parameter order.
  for (int n_trees : grid.n_trees) {
    for (const auto& max_depth : grid.max_depth) {
      for (int min_leaf : grid.min_samples_leaf) {
        for (int m : grid.fpca_m) {
          for (double ratio : grid.smote_target_ratio) {
            for (WeightScheme scheme : grid.weight_scheme) {
              ForestConfig cfg = base;
              cfg.n_trees = n_trees;
              cfg.tree.max_depth = max_depth;
              cfg.tree.min_samples_leaf = min_leaf;
              cfg.fpca = FpcaSelector::fixed(m);
              cfg.smote.target_ratio = ratio;
              cfg.tree.weight_scheme = scheme;

              ModelSpec spec;
              spec.forest = cfg;
              const CvResult inner = run_cv(train, spec, cv);
              GridEntry entry;
              entry.config = cfg;
              if (auto it = inner.summary.find("minority_f1");
                  it != inner.summary.end()) {
                entry.minority_f1 = it->second.mean;
              }
              if (auto it = inner.summary.find("auprc"); it != inner.summary.end()) {
                entry.auprc = it->second.mean;
              }
              for (const auto& w : inner.warnings) res.warnings.push_back(w);
              res.table.push_back(entry);

              const bool better =
                  !have_best || entry.minority_f1 > best_f1 ||
                  (entry.minority_f1 == best_f1 && entry.auprc > best_auprc);
              if (better) {
                have_best = true;
                best_f1 = entry.minority_f1;
                best_auprc = entry.auprc;
                res.best = cfg;
              }
            }
          }
        }
      }
    }
  }

  // Refit the winner on the full training portion; score on the held-out set.
  ForestConfig final_cfg = res.best;
  final_cfg.seed = derive_seed(cv.seed, kFitStream, 0xBE57ull);
  const ForestModel forest = fit_forest(train, final_cfg, cv.workers);
  const Prediction pred = predict(forest, test);
  const int minority = least_frequent_class(train.labels, data.num_classes);
  const ConfusionMatrix cm = confusion(test.labels, pred.labels, data.num_classes);
  if (data.num_classes == 2) {
    std::vector<double> scores;
    scores.reserve(test.size());
    for (const auto& row : pred.probabilities) scores.push_back(row[minority]);
    res.held_out = report(cm, minority, &test.labels, &scores);
  } else {
    res.held_out = report(cm, minority);
  }
  return res;
}

std::string ablation_csv(const AblationResult& result, const std::string& scenario) {
  std::string csv = "scenario,variant,repeat,fold,metric,value\n";
  for (const auto& variant : result.variants) {
    for (std::size_t i = 0; i < variant.result.fold_reports.size(); ++i) {
      const auto& info = variant.result.fold_info[i];
      for (const auto& [name, value] : metric_values(variant.result.fold_reports[i])) {
        csv += scenario;
        csv += ',';
        csv += variant.name;
        csv += ',';
        csv += std::to_string(info.repeat);
        csv += ',';
        csv += std::to_string(info.fold);
        csv += ',';
        csv += name;
        csv += ',';
        csv += format_value(value);
        csv += '\n';
      }
    }
  }
  return csv;
}

namespace {

nlohmann::json cv_result_to_json_obj(const CvResult& result) {
  nlohmann::json j;
  auto& reports = j["fold_reports"] = nlohmann::json::array();
  for (const auto& rep : result.fold_reports) {
    reports.push_back(nlohmann::json::parse(rep.to_json()));
  }
  auto& info = j["fold_info"] = nlohmann::json::array();
  for (const auto& fi : result.fold_info) {
    info.push_back({{"repeat", fi.repeat},
                    {"fold", fi.fold},
                    {"minority_class", fi.minority_class},
                    {"smote_synthetic_count", fi.smote_synthetic_count},
                    {"fpca_eigenvalue_sum", fi.fpca_eigenvalue_sum}});
  }
  auto& summary = j["summary"] = nlohmann::json::object();
  for (const auto& [name, s] : result.summary) {
    summary[name] = {{"mean", s.mean}, {"sd", s.sd}};
  }
  j["warnings"] = result.warnings;
  return j;
}

}  // namespace

std::string cv_result_json(const CvResult& result) {
  return cv_result_to_json_obj(result).dump(2);
}

std::string ablation_json(const AblationResult& result) {
  nlohmann::json j;
  auto& variants = j["variants"] = nlohmann::json::array();
  for (const auto& v : result.variants) {
    nlohmann::json e;
    e["name"] = v.name;
    e["config"] = v.config;
    e["result"] = cv_result_to_json_obj(v.result);
    variants.push_back(std::move(e));
  }
  auto& diffs = j["paired_differences"] = nlohmann::json::object();
  for (const auto& [metric, per_variant] : result.paired_differences) {
    diffs[metric] = per_variant;
  }
  return j.dump(2);
}

}  // namespace frfacs
