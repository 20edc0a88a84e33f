#include "frfacs/distance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "frfacs/errors.hpp"

namespace frfacs {

double l2_distance_sq(const Curve& x, const Curve& y) {
  require_same_grid(*x.grid, *y.grid, "l2_distance_sq");
  const auto& w = x.grid->trapezoid_weights();
  double s = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double d = x.values[i] - y.values[i];
    s += w[i] * d * d;
  }
  return s;
}

double dtw_distance(const std::vector<double>& x, const std::vector<double>& y,
                    const DtwConfig& cfg) {
  const std::size_t nx = x.size();
  const std::size_t ny = y.size();
  if (nx == 0 || ny == 0) throw ArgumentError("dtw_distance: empty sequence");

  const double inf = std::numeric_limits<double>::infinity();
  long band = cfg.band_radius ? static_cast<long>(*cfg.band_radius)
                              : static_cast<long>(std::max(nx, ny));
  if (cfg.band_radius) {
    if (*cfg.band_radius < 0) throw ConfigError("dtw_distance: negative band");
    // The band must cover the endpoint offset or no path exists.
    const long offset =
        std::labs(static_cast<long>(nx) - static_cast<long>(ny));
    if (band < offset) {
      throw ConfigError("dtw_distance: band too narrow for sequence lengths");
    }
  }

  // Two-row dynamic program over the (nx x ny) cost lattice.
  std::vector<double> prev(ny, inf), cur(ny, inf);
  for (std::size_t i = 0; i < nx; ++i) {
    std::fill(cur.begin(), cur.end(), inf);
    const long lo = std::max<long>(0, static_cast<long>(i) - band);
    const long hi =
        std::min<long>(static_cast<long>(ny) - 1, static_cast<long>(i) + band);
    for (long j = lo; j <= hi; ++j) {
      const double d = x[i] - y[j];
      const double cost = d * d;
      if (i == 0 && j == 0) {
        cur[j] = cost;
        continue;
      }
      double best = inf;
      if (i > 0) best = std::min(best, prev[j]);
      if (j > 0) best = std::min(best, cur[j - 1]);
      if (i > 0 && j > 0) best = std::min(best, prev[j - 1]);
      cur[j] = cost + best;
    }
    std::swap(prev, cur);
  }
  const double result = prev[ny - 1];
  if (!std::isfinite(result)) {
    throw ConfigError("dtw_distance: band admits no warping path");
  }
  return result;
}

double dtw_distance(const Curve& x, const Curve& y, const DtwConfig& cfg) {
  return dtw_distance(x.values, y.values, cfg);
}

}  // namespace frfacs
