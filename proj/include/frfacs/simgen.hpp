#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "frfacs/fdata.hpp"

namespace frfacs {

// Two-class synthetic generator: curves are class-conditional Gaussian
// combinations of the sinusoidal basis plus pointwise Gaussian noise, with
// majority/minority sizes set by the imbalance ratio R.
struct SimConfig {
  int n = 300;
  double imbalance_ratio = 5.0;  // majority : minority, >= 1
  int grid_size = 101;           // uniform grid on [0, 1]
  int m0 = 3;                    // generating basis size
  std::vector<std::vector<double>> class_means;  // per class, length m0
  std::vector<double> tau;                       // coefficient SDs, length m0
  double noise_sd = 0.05;
  std::uint64_t seed = 0;
};

// Fills class_means/tau with the documented defaults when empty:
// class 0 mean zero, class 1 mean (delta, delta/2, delta/4, ...) with
// delta = 1, and tau_m = 1/m.
SimConfig with_default_means(SimConfig cfg);

// n0 = floor(R/(1+R) * n) majority samples (class 0), n1 = n - n0 minority
// (class 1), emitted majority-first. Deterministic under seed.
FunctionalDataset generate(const SimConfig& cfg);

struct ScenarioSpec {
  std::string name;
  SimConfig config;
  int fpca_dim = 10;  // suggested retained components for this scenario
};

// The noise/imbalance/FPCA-dimension grid rows plus the sample-size ladder
// {100, 300, 500, 800, 1000}.
std::vector<ScenarioSpec> default_scenarios();

std::string scenario_manifest_json(const std::vector<ScenarioSpec>& scenarios);

}  // namespace frfacs
