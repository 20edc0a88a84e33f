#include "frfacs/fdata.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "frfacs/errors.hpp"
#include "frfacs/linalg.hpp"

namespace frfacs {

Grid::Grid(std::vector<double> points) : points_(std::move(points)) {
  if (points_.size() < 2) {
    throw ArgumentError("grid needs at least 2 points");
  }
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (!std::isfinite(points_[i])) {
      throw ArgumentError("grid point " + std::to_string(i) + " is not finite");
    }
    if (i > 0 && points_[i] <= points_[i - 1]) {
      throw ArgumentError("grid not strictly increasing at index " +
                          std::to_string(i));
    }
  }
  weights_.assign(points_.size(), 0.0);
  for (std::size_t i = 0; i + 1 < points_.size(); ++i) {
    const double h = points_[i + 1] - points_[i];
    weights_[i] += 0.5 * h;
    weights_[i + 1] += 0.5 * h;
  }
}

bool same_grid(const Grid& x, const Grid& y) {
  if (&x == &y) return true;
  return x.points() == y.points();
}

void require_same_grid(const Grid& x, const Grid& y, const char* where) {
  if (!same_grid(x, y)) {
    throw ArgumentError(std::string(where) + ": curves on different grids");
  }
}

Curve make_curve(GridPtr grid, std::vector<double> values) {
  if (!grid) throw ArgumentError("make_curve: null grid");
  if (values.size() != grid->size()) {
    throw ArgumentError("make_curve: value count " +
                        std::to_string(values.size()) + " != grid size " +
                        std::to_string(grid->size()));
  }
  for (double v : values) {
    if (!std::isfinite(v)) throw ArgumentError("make_curve: non-finite value");
  }
  return Curve{std::move(grid), std::move(values)};
}

FunctionalDataset make_dataset(GridPtr grid,
                               std::vector<std::vector<double>> curves,
                               std::vector<int> labels, int num_classes,
                               std::vector<std::string> label_names) {
  if (!grid) throw ArgumentError("make_dataset: null grid");
  if (curves.size() != labels.size()) {
    throw ArgumentError("make_dataset: curve/label count mismatch");
  }
  for (const auto& c : curves) {
    if (c.size() != grid->size()) {
      throw ArgumentError("make_dataset: curve length != grid size");
    }
  }
  for (int y : labels) {
    if (y < 0 || y >= num_classes) {
      throw ArgumentError("make_dataset: label out of range");
    }
  }
  if (label_names.empty()) {
    for (int k = 0; k < num_classes; ++k) label_names.push_back(std::to_string(k));
  }
  FunctionalDataset ds;
  ds.grid = std::move(grid);
  ds.curves = std::move(curves);
  ds.labels = std::move(labels);
  ds.num_classes = num_classes;
  ds.label_names = std::move(label_names);
  return ds;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur.push_back(ch);
    }
  }
  out.push_back(cur);
  return out;
}

double parse_cell(const std::string& s, std::size_t row, std::size_t col) {
  try {
    std::size_t pos = 0;
    double v = std::stod(s, &pos);
    while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\t')) ++pos;
    if (pos != s.size()) throw std::invalid_argument("trailing garbage");
    return v;
  } catch (const std::exception&) {
    throw FormatError("non-numeric cell at row " + std::to_string(row) +
                      ", column " + std::to_string(col) + ": '" + s + "'");
  }
}

}  // namespace

FunctionalDataset load_dataset(const std::string& path, int expected_classes) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open dataset file: " + path);

  std::string line;
  if (!std::getline(in, line)) throw FormatError("empty dataset file: " + path);
  auto header = split_csv_line(line);
  if (header.size() < 4 || header[0] != "id" || header[1] != "label") {
    throw FormatError("bad header: expected 'id,label,<grid values...>'");
  }
  std::vector<double> grid_pts;
  for (std::size_t c = 2; c < header.size(); ++c) {
    grid_pts.push_back(parse_cell(header[c], 0, c));
  }
  GridPtr grid;
  try {
    grid = std::make_shared<Grid>(std::move(grid_pts));
  } catch (const ArgumentError& e) {
    throw FormatError(std::string("bad grid header: ") + e.what());
  }

  std::vector<std::vector<double>> curves;
  std::vector<int> labels;
  std::vector<std::string> label_names;
  std::unordered_map<std::string, int> label_map;

  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty() || line == "\r") continue;
    auto cells = split_csv_line(line);
    if (cells.size() != grid->size() + 2) {
      throw FormatError("ragged row " + std::to_string(row) + ": got " +
                        std::to_string(cells.size() - 2) + " values under " +
                        std::to_string(grid->size()) + "-point grid");
    }
    const std::string& lab = cells[1];
    auto it = label_map.find(lab);
    int y;
    if (it == label_map.end()) {
      y = static_cast<int>(label_names.size());
      label_map.emplace(lab, y);
      label_names.push_back(lab);
    } else {
      y = it->second;
    }
    std::vector<double> vals;
    vals.reserve(grid->size());
    for (std::size_t c = 2; c < cells.size(); ++c) {
      vals.push_back(parse_cell(cells[c], row, c));
    }
    curves.push_back(std::move(vals));
    labels.push_back(y);
  }
  const int k = static_cast<int>(label_names.size());
  if (expected_classes > 0 && k != expected_classes) {
    throw FormatError("expected " + std::to_string(expected_classes) +
                      " classes, found " + std::to_string(k));
  }
  return make_dataset(grid, std::move(curves), std::move(labels), k,
                      std::move(label_names));
}

void save_dataset(const FunctionalDataset& data, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write dataset file: " + path);
  char buf[32];
  out << "id,label";
  for (double t : data.grid->points()) {
    std::snprintf(buf, sizeof(buf), "%.17g", t);
    out << ',' << buf;
  }
  out << '\n';
  for (std::size_t i = 0; i < data.size(); ++i) {
    out << i << ',' << data.label_names[data.labels[i]];
    for (double v : data.curves[i]) {
      std::snprintf(buf, sizeof(buf), "%.17g", v);
      out << ',' << buf;
    }
    out << '\n';
  }
}

double quad_inner(const Grid& grid, const std::vector<double>& x,
                  const std::vector<double>& y) {
  const auto& w = grid.trapezoid_weights();
  if (x.size() != w.size() || y.size() != w.size()) {
    throw ArgumentError("quad_inner: length mismatch with grid");
  }
  double s = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) s += w[i] * x[i] * y[i];
  return s;
}

double quad_norm_sq(const Grid& grid, const std::vector<double>& x) {
  return quad_inner(grid, x, x);
}

BasisSet fourier_basis(GridPtr grid, int m_basis) {
  if (!grid) throw ArgumentError("fourier_basis: null grid");
  if (m_basis < 1) throw ArgumentError("fourier_basis: M_basis must be >= 1");

  const auto& t = grid->points();
  const double a = grid->a();
  const double len = grid->b() - a;
  const double two_pi = 2.0 * 3.14159265358979323846;

  BasisSet basis;
  basis.grid = grid;
  for (int m = 0; m < m_basis; ++m) {
    std::vector<double> f(t.size());
    if (m == 0) {
      std::fill(f.begin(), f.end(), 1.0);
    } else {
      const int freq = (m + 1) / 2;
      const bool is_sin = (m % 2 == 1);
      for (std::size_t i = 0; i < t.size(); ++i) {
        const double u = (t[i] - a) / len;
        f[i] = is_sin ? std::sin(two_pi * freq * u) : std::cos(two_pi * freq * u);
      }
    }
    const double nrm = std::sqrt(quad_norm_sq(*grid, f));
    if (nrm > 0) {
      for (double& v : f) v /= nrm;
    }
    basis.functions.push_back(std::move(f));
  }

  // Coarse grids cannot resolve the higher frequencies; flag, don't fail.
  double max_dev = 0.0;
  for (std::size_t i = 0; i < basis.functions.size(); ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      const double g = quad_inner(*grid, basis.functions[i], basis.functions[j]);
      max_dev = std::max(max_dev, std::abs(g - (i == j ? 1.0 : 0.0)));
    }
  }
  basis.orthonormality_ok = max_dev <= 1e-3;
  return basis;
}

BasisCoefficients project_to_basis(const Curve& curve, const BasisSet& basis) {
  require_same_grid(*curve.grid, *basis.grid, "project_to_basis");
  const std::size_t m = basis.functions.size();
  std::vector<std::vector<double>> gram(m, std::vector<double>(m));
  std::vector<double> rhs(m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      gram[i][j] = gram[j][i] =
          quad_inner(*basis.grid, basis.functions[i], basis.functions[j]);
    }
    rhs[i] = quad_inner(*basis.grid, basis.functions[i], curve.values);
  }
  const double cond = spd_condition_estimate(gram);
  if (!(cond < 1e12)) {
    throw NumericError("project_to_basis: basis Gram matrix ill-conditioned");
  }
  BasisCoefficients out;
  out.kind = basis.kind;
  out.coefficients = solve_spd(gram, rhs);
  return out;
}

Curve reconstruct_from_basis(const BasisCoefficients& coeffs,
                             const BasisSet& basis) {
  if (coeffs.coefficients.size() != basis.functions.size()) {
    throw ArgumentError("reconstruct_from_basis: coefficient count mismatch");
  }
  std::vector<double> vals(basis.grid->size(), 0.0);
  for (std::size_t m = 0; m < basis.functions.size(); ++m) {
    const double c = coeffs.coefficients[m];
    for (std::size_t i = 0; i < vals.size(); ++i) {
      vals[i] += c * basis.functions[m][i];
    }
  }
  return Curve{basis.grid, std::move(vals)};
}

}  // namespace frfacs
