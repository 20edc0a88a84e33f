#pragma once

#include <optional>
#include <string>
#include <vector>

#include "frfacs/fdata.hpp"

namespace frfacs {

// Component retention rule: a fixed count, or the smallest M whose
// cumulative eigenvalue fraction reaches a threshold.
struct FpcaSelector {
  std::optional<int> fixed_m;
  std::optional<double> variance_fraction;

  static FpcaSelector fixed(int m) { return FpcaSelector{m, std::nullopt}; }
  static FpcaSelector variance(double frac) {
    return FpcaSelector{std::nullopt, frac};
  }
};

struct ScoreDataset {
  std::vector<std::vector<double>> scores;  // n x M
  std::vector<int> labels;
  int num_classes = 0;
  enum class Source { fpca, basis } source = Source::fpca;

  std::size_t size() const { return scores.size(); }
  std::size_t dim() const { return scores.empty() ? 0 : scores[0].size(); }
};

struct TruncationResult {
  double value = 0.0;
  // False when the supplied data is not the fitting set; the Lemma-style
  // tail identity is then not guaranteed.
  bool fitted_on_this_data = true;
};

// Empirical FPCA of curves on a shared grid: quadrature-weighted
// eigendecomposition of the discretized sample covariance. The full spectrum
// is kept internally for truncation-error accounting; `retained()` components
// drive the score transform.
class FpcaModel {
 public:
  const GridPtr& grid() const { return grid_; }
  const std::vector<double>& mean_curve() const { return mean_; }
  const std::vector<double>& eigenvalues() const { return eigenvalues_; }
  const std::vector<std::vector<double>>& eigenfunctions() const {
    return eigenfunctions_;
  }
  int retained() const { return retained_; }
  const std::vector<std::string>& warnings() const { return warnings_; }

  // Scores of length retained(): quadrature inner products of the centered
  // curve with the leading eigenfunctions.
  std::vector<double> transform(const Curve& curve) const;
  ScoreDataset transform_all(const FunctionalDataset& data) const;

  // mean + sum_m scores[m] * psi_m; score length must equal retained().
  Curve reconstruct(const std::vector<double>& scores) const;

  // Mean quadrature squared reconstruction error at truncation level m_used.
  // On the fitting set this equals the eigenvalue tail sum.
  TruncationResult truncation_error(const FunctionalDataset& data,
                                    int m_used) const;

  double eigenvalue_tail_sum(int m_used) const;

  std::string to_json() const;
  static FpcaModel from_json(const std::string& text);

 private:
  friend FpcaModel fit_fpca(const FunctionalDataset&, const FpcaSelector&);

  GridPtr grid_;
  std::vector<double> mean_;
  std::vector<double> eigenvalues_;                // full spectrum, clamped
  std::vector<std::vector<double>> eigenfunctions_;  // full, quadrature-orthonormal
  int retained_ = 0;
  std::vector<std::string> warnings_;
  // Fingerprint of the fitting data, for the truncation-identity flag.
  std::size_t fit_n_ = 0;
  double fit_checksum_ = 0.0;
};

FpcaModel fit_fpca(const FunctionalDataset& data, const FpcaSelector& selector);

}  // namespace frfacs
