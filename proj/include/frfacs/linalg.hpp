#pragma once

#include <vector>

namespace frfacs {

struct EigenDecomposition {
  std::vector<double> values;                // sorted non-increasing
  std::vector<std::vector<double>> vectors;  // vectors[i] pairs with values[i]
};

// Symmetric eigendecomposition by cyclic Jacobi rotations. Converges when the
// off-diagonal Frobenius norm drops below tol (relative to the input scale),
// capped at max_sweeps sweeps.
EigenDecomposition jacobi_eigen_sym(std::vector<std::vector<double>> a,
                                    double tol = 1e-12, int max_sweeps = 100);

// Solves a symmetric positive-definite system via Cholesky.
std::vector<double> solve_spd(const std::vector<std::vector<double>>& a,
                              const std::vector<double>& b);

// lambda_max / lambda_min of a small SPD matrix (Jacobi-based).
double spd_condition_estimate(const std::vector<std::vector<double>>& a);

}  // namespace frfacs
