#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "frfacs/errors.hpp"
#include "frfacs/imbalance.hpp"

using namespace frfacs;

namespace {

ScoreDataset make_scores(std::vector<std::vector<double>> rows,
                         std::vector<int> labels, int num_classes) {
  ScoreDataset ds;
  ds.scores = std::move(rows);
  ds.labels = std::move(labels);
  ds.num_classes = num_classes;
  return ds;
}

double dist(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

}  // namespace

TEST_CASE("global inverse-frequency weights") {
  SUBCASE("90/10 split") {
    std::vector<int> labels(100, 0);
    std::fill(labels.begin() + 90, labels.end(), 1);
    const auto w = global_weights(labels, 2);
    CHECK(w.weights[0] == doctest::Approx(100.0 / 90.0).epsilon(1e-12));
    CHECK(w.weights[1] == doctest::Approx(10.0).epsilon(1e-12));
    CHECK(w.scheme == WeightScheme::global_inverse_frequency);
  }

  SUBCASE("balanced classes get equal weights") {
    const auto w = global_weights({0, 1, 0, 1}, 2);
    CHECK(w.weights[0] == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(w.weights[1] == doctest::Approx(2.0).epsilon(1e-12));
  }

  SUBCASE("absent class is an error") {
    CHECK_THROWS_AS(global_weights({0, 0, 0}, 2), ArgumentError);
  }
}

TEST_CASE("dynamic node weights") {
  SUBCASE("counts [90, 10]") {
    const auto w = node_weights({90, 10}, 1e-6);
    CHECK(w.weights[0] == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(w.weights[1] == doctest::Approx(9.0).epsilon(1e-6));
    CHECK(w.scheme == WeightScheme::node_dynamic);
  }

  SUBCASE("empty class stays finite through epsilon") {
    const auto w = node_weights({10, 0}, 1e-6);
    CHECK(w.weights[1] == doctest::Approx(1e7).epsilon(1e-3));
    CHECK(std::isfinite(w.weights[1]));
  }

  SUBCASE("balanced counts give unit weights") {
    const auto w = node_weights({5, 5, 5}, 1e-6);
    for (double v : w.weights) CHECK(v == doctest::Approx(1.0).epsilon(1e-6));
  }
}

TEST_CASE("smote synthetic rows lie on the parent segment") {
  // 8 majority rows, 3 minority rows in 2-D score space.
  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
  for (int i = 0; i < 8; ++i) {
    rows.push_back({static_cast<double>(i), -5.0});
    labels.push_back(0);
  }
  rows.push_back({0.0, 1.0});
  rows.push_back({2.0, 3.0});
  rows.push_back({4.0, 1.0});
  labels.insert(labels.end(), 3, 1);
  const auto scores = make_scores(rows, labels, 2);

  SmoteConfig cfg;
  cfg.target_ratio = 1.0;
  cfg.k_neighbors = 2;

  std::size_t total_checked = 0;
  for (uint64_t seed = 0; total_checked < 1000; ++seed) {
    Rng rng(derive_seed(99, seed));
    const auto res = functional_smote(scores, cfg, rng);
    REQUIRE(res.applied);
    REQUIRE(res.records.size() == res.synthetic_count);
    for (std::size_t s = 0; s < res.synthetic_count; ++s) {
      const auto& rec = res.records[s];
      const auto& z = res.data.scores[rows.size() + s];
      const auto& a = rows[rec.parent_a];
      const auto& b = rows[rec.parent_b];
      // Both parents are minority rows.
      CHECK(labels[rec.parent_a] == 1);
      CHECK(labels[rec.parent_b] == 1);
      CHECK(rec.lambda >= 0.0);
      CHECK(rec.lambda < 1.0);
      // Exact convex combination with the logged lambda.
      for (std::size_t d = 0; d < z.size(); ++d) {
        CHECK(std::abs(z[d] - (a[d] + rec.lambda * (b[d] - a[d]))) <= 1e-12);
      }
      // Collinearity: distance via the segment equals the direct distance.
      CHECK(std::abs(dist(a, z) + dist(z, b) - dist(a, b)) <= 1e-9);
      ++total_checked;
    }
  }
  CHECK(total_checked >= 1000);
}

TEST_CASE("smote hits the target ratio within one sample") {
  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
  for (int i = 0; i < 40; ++i) {
    rows.push_back({static_cast<double>(i)});
    labels.push_back(0);
  }
  for (int i = 0; i < 5; ++i) {
    rows.push_back({100.0 + i});
    labels.push_back(1);
  }
  const auto scores = make_scores(rows, labels, 2);

  for (double ratio : {0.3, 0.5, 0.75, 1.0}) {
    SmoteConfig cfg;
    cfg.target_ratio = ratio;
    Rng rng(7);
    const auto res = functional_smote(scores, cfg, rng);
    long minority = 0, majority = 0;
    for (int y : res.data.labels) (y == 1 ? minority : majority)++;
    CHECK(majority == 40);
    const double achieved = static_cast<double>(minority) / majority;
    CHECK(achieved >= ratio);
    CHECK(achieved < ratio + 1.0 / 40.0 + 1e-12);
    // All synthetic rows carry the minority label.
    for (std::size_t i = rows.size(); i < res.data.scores.size(); ++i) {
      CHECK(res.data.labels[i] == 1);
    }
  }
}

TEST_CASE("smote already at target adds nothing") {
  const auto scores = make_scores({{0.0}, {1.0}, {2.0}, {3.0}}, {0, 0, 1, 1}, 2);
  SmoteConfig cfg;
  cfg.target_ratio = 0.5;
  Rng rng(1);
  const auto res = functional_smote(scores, cfg, rng);
  CHECK(res.synthetic_count == 0);
  CHECK(res.data.size() == 4);
}

TEST_CASE("smote skips with warning when the minority has fewer than 2 rows") {
  const auto scores =
      make_scores({{0.0}, {1.0}, {2.0}, {3.0}, {9.0}}, {0, 0, 0, 0, 1}, 2);
  SmoteConfig cfg;
  cfg.target_ratio = 1.0;
  Rng rng(3);
  const auto res = functional_smote(scores, cfg, rng);
  CHECK_FALSE(res.applied);
  CHECK(res.synthetic_count == 0);
  CHECK(res.data.size() == scores.size());
  REQUIRE_FALSE(res.warnings.empty());
}

TEST_CASE("smote clips k to minority size minus one with warning") {
  const auto scores = make_scores(
      {{0.0}, {1.0}, {2.0}, {3.0}, {4.0}, {5.0}, {10.0}, {11.0}, {12.0}},
      {0, 0, 0, 0, 0, 0, 1, 1, 1}, 2);
  SmoteConfig cfg;
  cfg.target_ratio = 1.0;
  cfg.k_neighbors = 50;  // only 2 neighbors exist per minority row
  Rng rng(4);
  const auto res = functional_smote(scores, cfg, rng);
  CHECK(res.applied);
  CHECK_FALSE(res.warnings.empty());
  for (const auto& rec : res.records) {
    CHECK(rec.parent_a >= 6);
    CHECK(rec.parent_b >= 6);
    CHECK(rec.parent_a != rec.parent_b);
  }
}

TEST_CASE("smote nearest-neighbor pool respects the k limit") {
  // Minority rows on a line: neighbors of the end point with k=1 can only be
  // the adjacent point.
  const auto scores = make_scores(
      {{-9.0}, {-8.0}, {-7.0}, {-6.0}, {0.0}, {1.0}, {5.0}},
      {0, 0, 0, 0, 1, 1, 1}, 2);
  SmoteConfig cfg;
  cfg.target_ratio = 1.0;
  cfg.k_neighbors = 1;
  for (uint64_t seed = 0; seed < 30; ++seed) {
    Rng rng(seed);
    const auto res = functional_smote(scores, cfg, rng);
    for (const auto& rec : res.records) {
      if (rec.parent_a == 4) CHECK(rec.parent_b == 5);
      if (rec.parent_a == 5) CHECK(rec.parent_b == 4);
      if (rec.parent_a == 6) CHECK(rec.parent_b == 5);
    }
  }
}

TEST_CASE("bootstrap probabilities") {
  SUBCASE("uniform expected class mass, sums to one") {
    std::vector<int> labels(100, 0);
    std::fill(labels.begin() + 90, labels.end(), 1);
    const auto p = bootstrap_probabilities(labels, 2);
    double sum = 0.0, mass0 = 0.0, mass1 = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
      sum += p[i];
      (labels[i] == 0 ? mass0 : mass1) += p[i];
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(mass0 == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(mass1 == doctest::Approx(0.5).epsilon(1e-12));
    // Every member of a class has the same probability.
    CHECK(p[0] == doctest::Approx(0.5 / 90.0).epsilon(1e-12));
    CHECK(p[95] == doctest::Approx(0.5 / 10.0).epsilon(1e-12));
  }

  SUBCASE("three classes split evenly") {
    const auto p = bootstrap_probabilities({0, 0, 0, 1, 2, 2}, 3);
    double mass1 = p[3];
    CHECK(mass1 == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  }

  SUBCASE("absent class warned, mass split over present classes") {
    std::vector<std::string> warnings;
    const auto p = bootstrap_probabilities({0, 0, 1, 1}, 3, &warnings);
    CHECK_FALSE(warnings.empty());
    double sum = 0.0;
    for (double v : p) sum += v;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(p[0] == doctest::Approx(0.25).epsilon(1e-12));
  }
}

TEST_CASE("monte carlo bootstrap draw matches expected class frequency") {
  std::vector<int> labels(100, 0);
  std::fill(labels.begin() + 90, labels.end(), 1);
  const auto p = bootstrap_probabilities(labels, 2);
  std::vector<double> cum(p.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) cum[i] = (acc += p[i]);

  Rng rng(314159);
  const int draws = 100000;
  long minority = 0;
  for (int d = 0; d < draws; ++d) {
    const double u = rng.uniform();
    const auto it = std::upper_bound(cum.begin(), cum.end(), u);
    const auto idx = static_cast<std::size_t>(it - cum.begin());
    if (labels[std::min(idx, labels.size() - 1)] == 1) ++minority;
  }
  const double freq = static_cast<double>(minority) / draws;
  CHECK(std::abs(freq - 0.5) <= 0.01);
}
