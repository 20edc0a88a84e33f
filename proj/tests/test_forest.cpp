#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "frfacs/errors.hpp"
#include "frfacs/forest.hpp"
#include "frfacs/rng.hpp"
#include "frfacs/simgen.hpp"

using namespace frfacs;

namespace {

constexpr std::uint64_t kTreeStream = 0x54524545ull;

FunctionalDataset small_dataset(std::uint64_t seed = 7, int n = 60,
                                double ratio = 2.0) {
  SimConfig cfg;
  cfg.n = n;
  cfg.imbalance_ratio = ratio;
  cfg.grid_size = 41;
  cfg.seed = seed;
  return generate(with_default_means(cfg));
}

ForestConfig plain_rf_config(int n_trees, std::uint64_t seed, int fpca_m = 5) {
  ForestConfig cfg;
  cfg.n_trees = n_trees;
  cfg.use_smote = false;
  cfg.use_cost_bootstrap = false;
  cfg.tree.weight_scheme = WeightScheme::uniform;
  cfg.seed = seed;
  cfg.fpca = FpcaSelector::fixed(fpca_m);
  return cfg;
}

// Independent plain random forest: same FPCA scores, same per-tree seeding
// convention, uniform bootstrap, unweighted trees, majority vote.
std::vector<int> reference_plain_rf(const FunctionalDataset& data,
                                    const ForestConfig& cfg) {
  const auto fpca = fit_fpca(data, cfg.fpca);
  const auto scores = fpca.transform_all(data);
  const std::size_t n = scores.size();

  std::vector<std::vector<long>> votes(n, std::vector<long>(data.num_classes, 0));
  for (int t = 0; t < cfg.n_trees; ++t) {
    Rng rng(derive_seed(cfg.seed, kTreeStream, static_cast<std::uint64_t>(t)));
    ScoreDataset sample;
    sample.num_classes = scores.num_classes;
    for (std::size_t d = 0; d < n; ++d) {
      const std::size_t i = rng.uniform_index(n);
      sample.scores.push_back(scores.scores[i]);
      sample.labels.push_back(scores.labels[i]);
    }
    const auto tree = fit_tree(sample, cfg.tree, rng);
    for (std::size_t i = 0; i < n; ++i) {
      const auto& dist = route_by_threshold(*tree, scores.scores[i]).distribution;
      int best = 0;
      for (int k = 1; k < data.num_classes; ++k) {
        if (dist[k] > dist[best]) best = k;
      }
      ++votes[i][best];
    }
  }
  std::vector<int> labels(n);
  for (std::size_t i = 0; i < n; ++i) {
    int best = 0;
    for (int k = 1; k < data.num_classes; ++k) {
      if (votes[i][k] > votes[i][best]) best = k;
    }
    labels[i] = best;
  }
  return labels;
}

}  // namespace

TEST_CASE("fit_forest preconditions") {
  const auto data = small_dataset();
  ForestConfig cfg = plain_rf_config(3, 1);

  SUBCASE("too few samples") {
    SimConfig sc;
    sc.n = 6;
    sc.grid_size = 21;
    CHECK_THROWS_AS(fit_forest(generate(with_default_means(sc)), cfg),
                    ArgumentError);
  }

  SUBCASE("single class rejected") {
    auto one = data;
    std::fill(one.labels.begin(), one.labels.end(), 0);
    one.num_classes = 1;
    one.label_names = {"only"};
    CHECK_THROWS_AS(fit_forest(one, cfg), ArgumentError);
  }

  SUBCASE("zero trees rejected") {
    cfg.n_trees = 0;
    CHECK_THROWS_AS(fit_forest(data, cfg), ConfigError);
  }

  SUBCASE("degenerate curves rejected with a numeric error") {
    auto flat = data;
    for (auto& c : flat.curves) std::fill(c.begin(), c.end(), 1.0);
    CHECK_THROWS_AS(fit_forest(flat, cfg), NumericError);
  }
}

TEST_CASE("forest with everything disabled matches a plain random forest") {
  for (std::uint64_t seed : {11ull, 12ull, 13ull}) {
    const auto data = small_dataset(seed);
    const auto cfg = plain_rf_config(15, seed);
    const auto model = fit_forest(data, cfg);
    const auto pred = predict(model, data);
    CHECK(pred.labels == reference_plain_rf(data, cfg));
  }
}

TEST_CASE("single tree on separable data reaches training accuracy 1") {
  SimConfig sc;
  sc.n = 40;
  sc.imbalance_ratio = 1.0;
  sc.grid_size = 31;
  sc.noise_sd = 0.0;
  sc.seed = 3;
  sc = with_default_means(sc);
  sc.class_means[1] = {5.0, 0.0, 0.0};  // far-apart classes
  const auto data = generate(sc);

  ForestConfig cfg = plain_rf_config(1, 5, 3);
  const auto model = fit_forest(data, cfg);
  const auto pred = predict(model, data);
  std::size_t correct = 0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    correct += pred.labels[i] == data.labels[i];
  }
  CHECK(correct == data.size());
}

TEST_CASE("same seed twice gives byte-identical serialized models") {
  const auto data = small_dataset(21);
  ForestConfig cfg;
  cfg.n_trees = 10;
  cfg.seed = 99;
  cfg.fpca = FpcaSelector::fixed(5);
  const auto m1 = fit_forest(data, cfg);
  const auto m2 = fit_forest(data, cfg);
  CHECK(forest_to_json(m1) == forest_to_json(m2));
}

TEST_CASE("worker count does not change the fitted model") {
  const auto data = small_dataset(22);
  ForestConfig cfg;
  cfg.n_trees = 12;
  cfg.seed = 4242;
  cfg.fpca = FpcaSelector::fixed(5);
  const auto m1 = fit_forest(data, cfg, 1);
  const auto m2 = fit_forest(data, cfg, 2);
  const auto m8 = fit_forest(data, cfg, 8);
  const auto s1 = forest_to_json(m1);
  CHECK(s1 == forest_to_json(m2));
  CHECK(s1 == forest_to_json(m8));
}

TEST_CASE("T=1 forest prediction equals that tree's prediction") {
  const auto data = small_dataset(30);
  ForestConfig cfg = plain_rf_config(1, 17);
  const auto model = fit_forest(data, cfg);
  REQUIRE(model.trees.size() == 1);
  const auto pred = predict(model, data);
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto scores = model.fpca.transform(data.curve_at(i));
    const auto& dist = route_by_threshold(*model.trees[0], scores).distribution;
    int best = 0;
    for (int k = 1; k < data.num_classes; ++k) {
      if (dist[k] > dist[best]) best = k;
    }
    CHECK(pred.labels[i] == best);
  }
}

TEST_CASE("probability rows sum to one in both aggregation modes") {
  const auto data = small_dataset(41, 80);
  const auto queries = small_dataset(42, 100);
  for (auto agg : {Aggregation::majority_vote, Aggregation::probability_average}) {
    ForestConfig cfg;
    cfg.n_trees = 20;
    cfg.seed = 5;
    cfg.aggregation = agg;
    cfg.fpca = FpcaSelector::fixed(5);
    const auto model = fit_forest(data, cfg);
    const auto pred = predict(model, queries);
    for (const auto& row : pred.probabilities) {
      double sum = 0.0;
      for (double p : row) {
        CHECK(p >= 0.0);
        sum += p;
      }
      CHECK(std::abs(sum - 1.0) <= 1e-9);
    }
    // Reported label is the argmax of its probability row.
    for (std::size_t i = 0; i < pred.labels.size(); ++i) {
      for (int k = 0; k < data.num_classes; ++k) {
        CHECK(pred.probabilities[i][pred.labels[i]] >= pred.probabilities[i][k]);
      }
    }
  }
}

TEST_CASE("proximity matrix properties") {
  const auto data = small_dataset(50, 30);
  ForestConfig cfg;
  cfg.n_trees = 8;
  cfg.seed = 9;
  cfg.fpca = FpcaSelector::fixed(4);
  const auto model = fit_forest(data, cfg);
  const auto prox = proximity_matrix(model, data);
  REQUIRE(prox.size() == data.size());
  for (std::size_t i = 0; i < prox.size(); ++i) {
    CHECK(prox[i][i] == 1.0);
    for (std::size_t j = 0; j < prox.size(); ++j) {
      CHECK(prox[i][j] == prox[j][i]);
      CHECK(prox[i][j] >= 0.0);
      CHECK(prox[i][j] <= 1.0);
    }
  }

  SUBCASE("duplicated curve has proximity one with its copy") {
    auto dup = data;
    dup.curves.push_back(dup.curves[0]);
    dup.labels.push_back(dup.labels[0]);
    const auto p2 = proximity_matrix(model, dup);
    CHECK(p2[0][dup.size() - 1] == 1.0);
  }
}

TEST_CASE("fknn matches a brute-force nearest-neighbor vote") {
  const auto train = small_dataset(60, 25);
  const auto test = small_dataset(61, 15);

  for (auto metric : {CurveMetric::l2, CurveMetric::dtw}) {
    const int k = 5;
    const auto got = fknn_baseline(train, test, k, metric);
    for (std::size_t q = 0; q < test.size(); ++q) {
      std::vector<std::pair<double, std::size_t>> d;
      for (std::size_t i = 0; i < train.size(); ++i) {
        const double dist = metric == CurveMetric::l2
                                ? l2_distance_sq(test.curve_at(q), train.curve_at(i))
                                : dtw_distance(test.curve_at(q), train.curve_at(i));
        d.push_back({dist, i});
      }
      std::sort(d.begin(), d.end());
      std::vector<long> votes(train.num_classes, 0);
      for (int j = 0; j < k; ++j) ++votes[train.labels[d[j].second]];
      int best = 0;
      for (int c = 1; c < train.num_classes; ++c) {
        if (votes[c] > votes[best]) best = c;
      }
      CHECK(got[q] == best);
    }
  }
}

TEST_CASE("fknn edge cases") {
  const auto train = small_dataset(70, 20);

  SUBCASE("k = 1 on training points returns their own labels") {
    const auto got = fknn_baseline(train, train, 1, CurveMetric::l2);
    CHECK(got == train.labels);
  }

  SUBCASE("k = n returns the overall majority class for every query") {
    const auto got =
        fknn_baseline(train, train, static_cast<int>(train.size()), CurveMetric::l2);
    std::vector<long> counts(train.num_classes, 0);
    for (int y : train.labels) ++counts[y];
    const int majority = static_cast<int>(
        std::max_element(counts.begin(), counts.end()) - counts.begin());
    for (int y : got) CHECK(y == majority);
  }

  SUBCASE("k out of range rejected") {
    CHECK_THROWS_AS(
        fknn_baseline(train, train, static_cast<int>(train.size()) + 1,
                      CurveMetric::l2),
        ArgumentError);
    CHECK_THROWS_AS(fknn_baseline(train, train, 0, CurveMetric::l2), ArgumentError);
  }
}

TEST_CASE("forest JSON round trip preserves predictions") {
  const auto data = small_dataset(80);
  ForestConfig cfg;
  cfg.n_trees = 6;
  cfg.seed = 77;
  cfg.fpca = FpcaSelector::fixed(4);
  const auto model = fit_forest(data, cfg);
  const auto text = forest_to_json(model);
  const auto back = forest_from_json(text);
  CHECK(forest_to_json(back) == text);
  CHECK(predict(back, data).labels == predict(model, data).labels);
  CHECK(back.smote_synthetic_count == model.smote_synthetic_count);
}

TEST_CASE("prototype routing forest predicts end to end") {
  const auto data = small_dataset(90, 50);
  ForestConfig cfg;
  cfg.n_trees = 5;
  cfg.seed = 8;
  cfg.fpca = FpcaSelector::fixed(4);
  cfg.tree.routing = Routing::prototype_distance;
  const auto model = fit_forest(data, cfg);
  const auto pred = predict(model, data);
  REQUIRE(pred.labels.size() == data.size());
  for (const auto& row : pred.probabilities) {
    double sum = 0.0;
    for (double p : row) sum += p;
    CHECK(std::abs(sum - 1.0) <= 1e-9);
  }
}

TEST_CASE("grid mismatch at prediction is an argument error") {
  const auto data = small_dataset(95);
  ForestConfig cfg = plain_rf_config(2, 1);
  const auto model = fit_forest(data, cfg);
  SimConfig other;
  other.n = 20;
  other.grid_size = 11;
  CHECK_THROWS_AS(predict(model, generate(with_default_means(other))),
                  ArgumentError);
}
