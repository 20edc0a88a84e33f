#pragma once

#include <memory>
#include <string>
#include <vector>

namespace frfacs {

// Shared discretization grid on [a, b]. Strictly increasing, length >= 2.
class Grid {
 public:
  explicit Grid(std::vector<double> points);

  double a() const { return points_.front(); }
  double b() const { return points_.back(); }
  std::size_t size() const { return points_.size(); }
  const std::vector<double>& points() const { return points_; }

  // Trapezoid quadrature weights over [a, b].
  const std::vector<double>& trapezoid_weights() const { return weights_; }

 private:
  std::vector<double> points_;
  std::vector<double> weights_;
};

using GridPtr = std::shared_ptr<const Grid>;

// Two grids are interchangeable if they are the same object or hold equal
// points. Operations mixing different grids must fail fast.
bool same_grid(const Grid& x, const Grid& y);
void require_same_grid(const Grid& x, const Grid& y, const char* where);

struct Curve {
  GridPtr grid;
  std::vector<double> values;
};

// Validates value/grid length and finiteness.
Curve make_curve(GridPtr grid, std::vector<double> values);

struct FunctionalDataset {
  GridPtr grid;
  std::vector<std::vector<double>> curves;  // n rows, each of grid size
  std::vector<int> labels;                  // contiguous 0-based
  int num_classes = 0;
  std::vector<std::string> label_names;     // original labels, by first appearance

  std::size_t size() const { return curves.size(); }
  Curve curve_at(std::size_t i) const { return Curve{grid, curves[i]}; }
};

FunctionalDataset make_dataset(GridPtr grid,
                               std::vector<std::vector<double>> curves,
                               std::vector<int> labels, int num_classes,
                               std::vector<std::string> label_names = {});

// Wide CSV: line 1 = "id,label," then grid values; each data line = id,
// label, one value per grid point. Labels are remapped to 0-based indices by
// first appearance.
FunctionalDataset load_dataset(const std::string& path,
                               int expected_classes = 0);
void save_dataset(const FunctionalDataset& data, const std::string& path);

enum class BasisKind { fourier };

struct BasisCoefficients {
  std::vector<double> coefficients;
  BasisKind kind = BasisKind::fourier;
};

struct BasisSet {
  GridPtr grid;
  std::vector<std::vector<double>> functions;  // M_basis rows on the grid
  BasisKind kind = BasisKind::fourier;
  // False when the grid is too coarse for the quadrature Gram matrix to be
  // near identity; the basis is still returned.
  bool orthonormality_ok = true;
};

// phi_1 = constant, then sin/cos pairs at increasing frequency on [a, b],
// each L2-normalized under trapezoid quadrature.
BasisSet fourier_basis(GridPtr grid, int m_basis);

// Quadrature-weighted least squares onto the basis (normal equations).
BasisCoefficients project_to_basis(const Curve& curve, const BasisSet& basis);

Curve reconstruct_from_basis(const BasisCoefficients& coeffs,
                             const BasisSet& basis);

// Quadrature inner product and squared norm on a shared grid.
double quad_inner(const Grid& grid, const std::vector<double>& x,
                  const std::vector<double>& y);
double quad_norm_sq(const Grid& grid, const std::vector<double>& x);

}  // namespace frfacs
