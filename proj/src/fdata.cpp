#include "specop/fdata.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <vector>

#include "specop/errors.hpp"

namespace specop {

namespace {

constexpr int kMinLength = 4;  // below this there is no interior frequency

std::vector<std::string> split(const std::string& line, char delimiter) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, delimiter)) fields.push_back(field);
  if (!line.empty() && line.back() == delimiter) fields.emplace_back();
  return fields;
}

double parse_cell(const std::string& text, int line_no, int column_no) {
  errno = 0;
  const char* begin = text.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  // Trailing whitespace is fine; any other residue is not a number.
  while (end && *end != '\0' && std::isspace(static_cast<unsigned char>(*end))) ++end;
  if (end == begin || (end && *end != '\0') || errno == ERANGE || !std::isfinite(v)) {
    throw ParseError("non-numeric cell at line " + std::to_string(line_no) +
                     ", column " + std::to_string(column_no) + ": '" + text + "'");
  }
  return v;
}

std::string format17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

Grid Grid::midpoints(int k) {
  if (k < 1) throw ContractViolation("Grid::midpoints: k must be >= 1");
  std::vector<double> pts(static_cast<std::size_t>(k));
  for (int j = 0; j < k; ++j) pts[static_cast<std::size_t>(j)] = (2.0 * j + 1.0) / (2.0 * k);
  return Grid(std::move(pts));
}

Grid Grid::endpoints(int k) {
  if (k < 2) throw ContractViolation("Grid::endpoints: k must be >= 2");
  std::vector<double> pts(static_cast<std::size_t>(k));
  for (int j = 0; j < k; ++j) pts[static_cast<std::size_t>(j)] = static_cast<double>(j) / (k - 1);
  return Grid(std::move(pts));
}

Grid Grid::make(GridPolicy policy, int k) {
  return policy == GridPolicy::midpoint ? midpoints(k) : endpoints(k);
}

Grid::Grid(std::vector<double> points) : points_(std::move(points)) {
  if (points_.empty()) throw ContractViolation("Grid: no points");
  double prev = -1.0;
  for (double p : points_) {
    if (!(p >= 0.0 && p <= 1.0)) throw ContractViolation("Grid: point outside [0, 1]");
    if (!(p > prev)) throw ContractViolation("Grid: points must be strictly ascending");
    prev = p;
  }
}

FunctionalSample::FunctionalSample(Grid grid, Eigen::MatrixXd values, bool centered)
    : grid_(std::move(grid)), values_(std::move(values)), centered_(centered) {
  if (values_.rows() < 1) throw ContractViolation("FunctionalSample: empty series");
  if (values_.cols() != grid_.size()) {
    throw ContractViolation("FunctionalSample: value columns do not match grid size");
  }
}

FunctionalSample load_csv(const std::string& path, char delimiter,
                          GridPolicy default_policy) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");

  std::vector<std::vector<double>> rows;
  std::vector<double> header_grid;
  bool have_header = false;
  std::string line;
  int line_no = 0;
  int width = -1;

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;

    if (line[0] == '#') {
      std::string body = line.substr(1);
      std::size_t pos = body.find_first_not_of(" \t");
      if (pos == std::string::npos || body.compare(pos, 5, "grid:") != 0) {
        throw ParseError("unrecognized header at line " + std::to_string(line_no) +
                         " (expected '# grid: ...')");
      }
      if (have_header || !rows.empty()) {
        throw ParseError("grid header at line " + std::to_string(line_no) +
                         " must be the first line");
      }
      const auto fields = split(body.substr(pos + 5), delimiter);
      for (std::size_t c = 0; c < fields.size(); ++c) {
        header_grid.push_back(parse_cell(fields[c], line_no, static_cast<int>(c + 1)));
      }
      have_header = true;
      continue;
    }

    const auto fields = split(line, delimiter);
    if (width < 0) {
      width = static_cast<int>(fields.size());
    } else if (static_cast<int>(fields.size()) != width) {
      throw ParseError("ragged row at line " + std::to_string(line_no) + ": expected " +
                       std::to_string(width) + " fields, found " +
                       std::to_string(fields.size()));
    }
    std::vector<double> row(fields.size());
    for (std::size_t c = 0; c < fields.size(); ++c) {
      row[c] = parse_cell(fields[c], line_no, static_cast<int>(c + 1));
    }
    rows.push_back(std::move(row));
  }

  if (rows.size() < static_cast<std::size_t>(kMinLength)) {
    throw ScopeError("'" + path + "' holds " + std::to_string(rows.size()) +
                     " curves; at least " + std::to_string(kMinLength) + " are required");
  }
  const int T = static_cast<int>(rows.size());
  const int k = width;
  if (have_header && static_cast<int>(header_grid.size()) != k) {
    throw ParseError("grid header lists " + std::to_string(header_grid.size()) +
                     " points but rows have " + std::to_string(k) + " columns");
  }

  Eigen::MatrixXd values(T, k);
  for (int t = 0; t < T; ++t)
    for (int j = 0; j < k; ++j) values(t, j) = rows[static_cast<std::size_t>(t)][static_cast<std::size_t>(j)];

  try {
    Grid grid = have_header ? Grid(std::move(header_grid)) : Grid::make(default_policy, k);
    return FunctionalSample(std::move(grid), std::move(values), false);
  } catch (const ContractViolation& e) {
    throw ParseError("invalid grid header in '" + path + "': " + e.what());
  }
}

void save_csv(const FunctionalSample& sample, const std::string& path, char delimiter) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot open '" + path + "' for writing");
  out << "# grid:";
  for (int j = 0; j < sample.grid_size(); ++j) {
    out << (j == 0 ? " " : std::string(1, delimiter)) << format17(sample.grid().point(j));
  }
  out << '\n';
  const auto& v = sample.values();
  for (int t = 0; t < sample.length(); ++t) {
    for (int j = 0; j < sample.grid_size(); ++j) {
      if (j > 0) out << delimiter;
      out << format17(v(t, j));
    }
    out << '\n';
  }
  if (!out) throw ParseError("write failure on '" + path + "'");
}

FunctionalSample center(const FunctionalSample& sample) {
  Eigen::MatrixXd v = sample.values();
  v.rowwise() -= v.colwise().mean();
  return FunctionalSample(sample.grid(), std::move(v), true);
}

namespace {

Eigen::MatrixXd basis_matrix(const Grid& grid, int n_basis) {
  const int k = grid.size();
  Eigen::MatrixXd phi(k, n_basis);
  phi.col(0).setOnes();
  const double root2 = std::sqrt(2.0);
  for (int m = 1; 2 * m - 1 < n_basis; ++m) {
    for (int j = 0; j < k; ++j) {
      const double arg = 2.0 * M_PI * m * grid.point(j);
      phi(j, 2 * m - 1) = root2 * std::cos(arg);
      phi(j, 2 * m) = root2 * std::sin(arg);
    }
  }
  return phi;
}

void check_basis_size(int n_basis, int k) {
  if (n_basis < 1 || n_basis % 2 == 0) {
    throw ContractViolation("n_basis must be a positive odd integer, got " +
                            std::to_string(n_basis));
  }
  if (n_basis > k) {
    throw ContractViolation("n_basis = " + std::to_string(n_basis) + " exceeds the grid size " +
                            std::to_string(k) + "; the projection is ill-posed");
  }
}

}  // namespace

BasisProjection project_fourier(const FunctionalSample& sample, int n_basis) {
  check_basis_size(n_basis, sample.grid_size());
  const double k = static_cast<double>(sample.grid_size());
  const Eigen::MatrixXd phi = basis_matrix(sample.grid(), n_basis);
  const Eigen::MatrixXd gram = phi.transpose() * phi / k;
  const Eigen::MatrixXd rhs = phi.transpose() * sample.values().transpose() / k;
  // Orthogonal decomposition tolerates the rank drop of periodic bases on
  // endpoint-inclusive grids (s = 0 and s = 1 are the same basis point).
  Eigen::MatrixXd coef = gram.completeOrthogonalDecomposition().solve(rhs).transpose();
  return BasisProjection{n_basis, std::move(coef)};
}

FunctionalSample fourier_smooth(const FunctionalSample& sample, int n_basis) {
  const BasisProjection proj = project_fourier(sample, n_basis);
  const Eigen::MatrixXd phi = basis_matrix(sample.grid(), n_basis);
  return FunctionalSample(sample.grid(), proj.coefficients * phi.transpose(),
                          sample.centered());
}

}  // namespace specop
