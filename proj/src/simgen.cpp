#include "frfacs/simgen.hpp"

#include <cmath>
#include <cstdio>

#include <json.hpp>

#include "frfacs/errors.hpp"
#include "frfacs/rng.hpp"

namespace frfacs {

SimConfig with_default_means(SimConfig cfg) {
  if (cfg.class_means.empty()) {
    std::vector<double> mu0(cfg.m0, 0.0);
    std::vector<double> mu1(cfg.m0);
    double delta = 1.0;
    for (int m = 0; m < cfg.m0; ++m) {
      mu1[m] = delta;
      delta *= 0.5;
    }
    cfg.class_means = {std::move(mu0), std::move(mu1)};
  }
  if (cfg.tau.empty()) {
    cfg.tau.resize(cfg.m0);
    for (int m = 0; m < cfg.m0; ++m) cfg.tau[m] = 1.0 / static_cast<double>(m + 1);
  }
  return cfg;
}

FunctionalDataset generate(const SimConfig& raw) {
  const SimConfig cfg = with_default_means(raw);
  if (cfg.n < 4) throw ConfigError("generate: n must be >= 4");
  if (cfg.imbalance_ratio < 1.0) throw ConfigError("generate: R must be >= 1");
  if (cfg.m0 < 1) throw ConfigError("generate: M0 must be >= 1");
  if (cfg.grid_size < 2) throw ConfigError("generate: grid_size must be >= 2");
  if (cfg.noise_sd < 0.0) throw ConfigError("generate: noise_sd must be >= 0");
  if (cfg.class_means.size() != 2) throw ConfigError("generate: need 2 class means");
  for (const auto& mu : cfg.class_means) {
    if (static_cast<int>(mu.size()) != cfg.m0) {
      throw ConfigError("generate: class mean length != M0");
    }
  }
  if (static_cast<int>(cfg.tau.size()) != cfg.m0) {
    throw ConfigError("generate: tau length != M0");
  }
  for (double t : cfg.tau) {
    if (!(t > 0.0)) throw ConfigError("generate: tau_m must be > 0");
  }

  const int n0 = static_cast<int>(std::floor(
      cfg.imbalance_ratio / (1.0 + cfg.imbalance_ratio) * cfg.n));
  const int n1 = cfg.n - n0;
  if (n1 == 0) throw ConfigError("generate: R too large for n (empty minority)");

  std::vector<double> pts(cfg.grid_size);
  for (int i = 0; i < cfg.grid_size; ++i) {
    pts[i] = static_cast<double>(i) / static_cast<double>(cfg.grid_size - 1);
  }
  auto grid = std::make_shared<Grid>(std::move(pts));
  const BasisSet basis = fourier_basis(grid, cfg.m0);

  Rng rng(derive_seed(cfg.seed, 0x53494dull));
  std::vector<std::vector<double>> curves;
  std::vector<int> labels;
  curves.reserve(cfg.n);
  labels.reserve(cfg.n);
  for (int i = 0; i < cfg.n; ++i) {
    const int y = i < n0 ? 0 : 1;
    std::vector<double> vals(grid->size(), 0.0);
    for (int m = 0; m < cfg.m0; ++m) {
      const double alpha = rng.normal(cfg.class_means[y][m], cfg.tau[m]);
      for (std::size_t j = 0; j < vals.size(); ++j) {
        vals[j] += alpha * basis.functions[m][j];
      }
    }
    if (cfg.noise_sd > 0.0) {
      for (double& v : vals) v += rng.normal(0.0, cfg.noise_sd);
    }
    curves.push_back(std::move(vals));
    labels.push_back(y);
  }
  return make_dataset(grid, std::move(curves), std::move(labels), 2,
                      {"majority", "minority"});
}

std::vector<ScenarioSpec> default_scenarios() {
  std::vector<ScenarioSpec> out;

  // Noise / imbalance / FPCA-dimension grid.
  struct Row {
    double noise;
    double ratio;
    int fpca_dim;
  };
  const Row rows[] = {{0.05, 2.0, 5},
                      {0.05, 5.0, 10},
                      {0.10, 5.0, 10},
                      {0.10, 10.0, 15},
                      {0.20, 10.0, 15}};
  int idx = 0;
  for (const Row& r : rows) {
    SimConfig cfg;
    cfg.n = 500;
    cfg.imbalance_ratio = r.ratio;
    cfg.noise_sd = r.noise;
    cfg.seed = 1000 + static_cast<std::uint64_t>(idx);
    char name[96];
    std::snprintf(name, sizeof(name), "grid_noise%.2f_imb1to%d_M%d", r.noise,
                  static_cast<int>(r.ratio), r.fpca_dim);
    out.push_back(ScenarioSpec{name, with_default_means(cfg), r.fpca_dim});
    ++idx;
  }

  // Sample-size ladder at the moderate setting.
  for (int n : {100, 300, 500, 800, 1000}) {
    SimConfig cfg;
    cfg.n = n;
    cfg.imbalance_ratio = 5.0;
    cfg.noise_sd = 0.05;
    cfg.seed = 2000 + static_cast<std::uint64_t>(n);
    out.push_back(ScenarioSpec{"size_n" + std::to_string(n),
                               with_default_means(cfg), 10});
  }
  return out;
}

std::string scenario_manifest_json(const std::vector<ScenarioSpec>& scenarios) {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& s : scenarios) {
    nlohmann::json e;
    e["name"] = s.name;
    e["fpca_dim"] = s.fpca_dim;
    e["n"] = s.config.n;
    e["imbalance_ratio"] = s.config.imbalance_ratio;
    e["grid_size"] = s.config.grid_size;
    e["m0"] = s.config.m0;
    e["class_means"] = s.config.class_means;
    e["tau"] = s.config.tau;
    e["noise_sd"] = s.config.noise_sd;
    e["seed"] = s.config.seed;
    j.push_back(std::move(e));
  }
  return j.dump(2);
}

}  // namespace frfacs
