#pragma once

#include <optional>
#include <vector>

#include "frfacs/fdata.hpp"

namespace frfacs {

struct DtwConfig {
  // Sakoe-Chiba half-width in grid steps; empty means full window.
  std::optional<int> band_radius;
};

// Trapezoid quadrature of (x - y)^2 over the shared grid domain.
double l2_distance_sq(const Curve& x, const Curve& y);

// Unnormalized squared-difference DTW with steps {left, up, diagonal},
// anchored at both endpoints.
double dtw_distance(const std::vector<double>& x, const std::vector<double>& y,
                    const DtwConfig& cfg = {});
double dtw_distance(const Curve& x, const Curve& y, const DtwConfig& cfg = {});

}  // namespace frfacs
