#include "frfacs/fpca.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "frfacs/errors.hpp"
#include "frfacs/linalg.hpp"

namespace frfacs {

namespace {

double dataset_checksum(const FunctionalDataset& data) {
  double s = 0.0;
  for (const auto& c : data.curves) {
    for (double v : c) s += v + 0.25 * v * v;
  }
  return s;
}

}  // namespace

FpcaModel fit_fpca(const FunctionalDataset& data, const FpcaSelector& selector) {
  const std::size_t n = data.size();
  if (n < 2) throw ArgumentError("fit_fpca: need at least 2 curves");
  if (selector.variance_fraction) {
    const double f = *selector.variance_fraction;
    if (!(f > 0.0 && f <= 1.0)) {
      throw ArgumentError("fit_fpca: variance fraction must be in (0,1]");
    }
  } else if (!selector.fixed_m || *selector.fixed_m < 1) {
    throw ArgumentError("fit_fpca: selector must fix M >= 1 or a variance fraction");
  }

  const std::size_t t_len = data.grid->size();
  const auto& w = data.grid->trapezoid_weights();

  FpcaModel model;
  model.grid_ = data.grid;
  model.mean_.assign(t_len, 0.0);
  for (const auto& c : data.curves) {
    for (std::size_t j = 0; j < t_len; ++j) model.mean_[j] += c[j];
  }
  for (double& v : model.mean_) v /= static_cast<double>(n);

  // Sample covariance on the grid (1/n normalization, so the mean squared
  // truncation error equals the eigenvalue tail sum exactly).
  std::vector<std::vector<double>> cov(t_len, std::vector<double>(t_len, 0.0));
  std::vector<double> centered(t_len);
  for (const auto& c : data.curves) {
    for (std::size_t j = 0; j < t_len; ++j) centered[j] = c[j] - model.mean_[j];
    for (std::size_t i = 0; i < t_len; ++i) {
      const double ci = centered[i];
      for (std::size_t j = i; j < t_len; ++j) cov[i][j] += ci * centered[j];
    }
  }
  for (std::size_t i = 0; i < t_len; ++i) {
    for (std::size_t j = i; j < t_len; ++j) {
      cov[i][j] /= static_cast<double>(n);
      cov[j][i] = cov[i][j];
    }
  }

  // Symmetrized quadrature weighting: eigenproblem of W^{1/2} C W^{1/2},
  // eigenvectors mapped back by W^{-1/2}.
  std::vector<double> sqw(t_len);
  for (std::size_t i = 0; i < t_len; ++i) sqw[i] = std::sqrt(w[i]);
  for (std::size_t i = 0; i < t_len; ++i) {
    for (std::size_t j = 0; j < t_len; ++j) cov[i][j] *= sqw[i] * sqw[j];
  }
  auto eig = jacobi_eigen_sym(std::move(cov));

  model.eigenvalues_.reserve(t_len);
  model.eigenfunctions_.reserve(t_len);
  for (std::size_t m = 0; m < t_len; ++m) {
    model.eigenvalues_.push_back(std::max(0.0, eig.values[m]));
    std::vector<double> psi(t_len);
    for (std::size_t j = 0; j < t_len; ++j) psi[j] = eig.vectors[m][j] / sqw[j];
    const double nrm = std::sqrt(quad_norm_sq(*data.grid, psi));
    if (nrm > 0) {
      for (double& v : psi) v /= nrm;
    }
    // Deterministic sign: largest-magnitude grid value made positive.
    std::size_t arg = 0;
    for (std::size_t j = 1; j < t_len; ++j) {
      if (std::abs(psi[j]) > std::abs(psi[arg])) arg = j;
    }
    if (psi[arg] < 0) {
      for (double& v : psi) v = -v;
    }
    model.eigenfunctions_.push_back(std::move(psi));
  }

  const int max_m = static_cast<int>(std::min(n - 1, t_len));
  int retained;
  if (selector.fixed_m) {
    retained = *selector.fixed_m;
    if (retained > max_m) {
      model.warnings_.push_back("requested M=" + std::to_string(retained) +
                                " clipped to " + std::to_string(max_m));
      retained = max_m;
    }
  } else {
    double total = 0.0;
    for (double v : model.eigenvalues_) total += v;
    retained = max_m;
    if (total > 0.0) {
      double cum = 0.0;
      for (int m = 0; m < max_m; ++m) {
        cum += model.eigenvalues_[m];
        if (cum / total >= *selector.variance_fraction) {
          retained = m + 1;
          break;
        }
      }
    } else {
      retained = 1;
      model.warnings_.push_back("zero total variance; retaining 1 component");
    }
  }
  model.retained_ = retained;
  model.fit_n_ = n;
  model.fit_checksum_ = dataset_checksum(data);
  return model;
}

std::vector<double> FpcaModel::transform(const Curve& curve) const {
  require_same_grid(*curve.grid, *grid_, "FpcaModel::transform");
  std::vector<double> centered(curve.values.size());
  for (std::size_t j = 0; j < centered.size(); ++j) {
    centered[j] = curve.values[j] - mean_[j];
  }
  std::vector<double> scores(retained_);
  for (int m = 0; m < retained_; ++m) {
    scores[m] = quad_inner(*grid_, centered, eigenfunctions_[m]);
  }
  return scores;
}

ScoreDataset FpcaModel::transform_all(const FunctionalDataset& data) const {
  require_same_grid(*data.grid, *grid_, "FpcaModel::transform_all");
  ScoreDataset out;
  out.labels = data.labels;
  out.num_classes = data.num_classes;
  out.source = ScoreDataset::Source::fpca;
  out.scores.reserve(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    out.scores.push_back(transform(data.curve_at(i)));
  }
  return out;
}

Curve FpcaModel::reconstruct(const std::vector<double>& scores) const {
  if (static_cast<int>(scores.size()) != retained_) {
    throw ArgumentError("FpcaModel::reconstruct: score length != retained M");
  }
  std::vector<double> vals = mean_;
  for (int m = 0; m < retained_; ++m) {
    for (std::size_t j = 0; j < vals.size(); ++j) {
      vals[j] += scores[m] * eigenfunctions_[m][j];
    }
  }
  return Curve{grid_, std::move(vals)};
}

TruncationResult FpcaModel::truncation_error(const FunctionalDataset& data,
                                             int m_used) const {
  if (m_used < 0 || m_used > static_cast<int>(eigenfunctions_.size())) {
    throw ArgumentError("truncation_error: M_used out of range");
  }
  require_same_grid(*data.grid, *grid_, "truncation_error");

  TruncationResult res;
  res.fitted_on_this_data =
      data.size() == fit_n_ && dataset_checksum(data) == fit_checksum_;

  std::vector<double> resid(grid_->size());
  double total = 0.0;
  for (const auto& c : data.curves) {
    for (std::size_t j = 0; j < resid.size(); ++j) resid[j] = c[j] - mean_[j];
    for (int m = 0; m < m_used; ++m) {
      const double xi = quad_inner(*grid_, resid, eigenfunctions_[m]);
      // Subtracting each projection in turn keeps the residual exactly
      // orthogonal to the used components in floating point.
      for (std::size_t j = 0; j < resid.size(); ++j) {
        resid[j] -= xi * eigenfunctions_[m][j];
      }
    }
    total += quad_norm_sq(*grid_, resid);
  }
  res.value = total / static_cast<double>(data.size());
  return res;
}

double FpcaModel::eigenvalue_tail_sum(int m_used) const {
  double s = 0.0;
  for (std::size_t m = static_cast<std::size_t>(m_used); m < eigenvalues_.size(); ++m) {
    s += eigenvalues_[m];
  }
  return s;
}

std::string FpcaModel::to_json() const {
  nlohmann::json j;
  j["grid"] = grid_->points();
  j["mean"] = mean_;
  j["eigenvalues"] = eigenvalues_;
  j["eigenfunctions"] = eigenfunctions_;
  j["quadrature_weights"] = grid_->trapezoid_weights();
  j["retained"] = retained_;
  j["warnings"] = warnings_;
  j["fit_n"] = fit_n_;
  j["fit_checksum"] = fit_checksum_;
  return j.dump();
}

FpcaModel FpcaModel::from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  FpcaModel m;
  m.grid_ = std::make_shared<Grid>(j.at("grid").get<std::vector<double>>());
  m.mean_ = j.at("mean").get<std::vector<double>>();
  m.eigenvalues_ = j.at("eigenvalues").get<std::vector<double>>();
  m.eigenfunctions_ =
      j.at("eigenfunctions").get<std::vector<std::vector<double>>>();
  m.retained_ = j.at("retained").get<int>();
  m.warnings_ = j.at("warnings").get<std::vector<std::string>>();
  m.fit_n_ = j.at("fit_n").get<std::size_t>();
  m.fit_checksum_ = j.at("fit_checksum").get<double>();
  return m;
}

}  // namespace frfacs
