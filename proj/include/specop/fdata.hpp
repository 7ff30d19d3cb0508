#pragma once

#include <Eigen/Dense>
#include <string>

#include "specop/grid.hpp"

namespace specop {

// A length-T series of curves observed on a common grid of k points.
// values(t, j) is curve t at grid point j. Immutable after construction.
class FunctionalSample {
 public:
  FunctionalSample(Grid grid, Eigen::MatrixXd values, bool centered = false);

  [[nodiscard]] const Grid& grid() const { return grid_; }
  [[nodiscard]] const Eigen::MatrixXd& values() const { return values_; }
  [[nodiscard]] int length() const { return static_cast<int>(values_.rows()); }
  [[nodiscard]] int grid_size() const { return static_cast<int>(values_.cols()); }
  [[nodiscard]] bool centered() const { return centered_; }

 private:
  Grid grid_;
  Eigen::MatrixXd values_;
  bool centered_;
};

// Reads one curve per row, one grid point per column. An optional first line
// `# grid: s_1,...,s_k` fixes the coordinates; otherwise the grid defaults to
// the given policy. At least 4 rows are required (shorter series have no
// interior Fourier frequency to smooth over).
FunctionalSample load_csv(const std::string& path, char delimiter = ',',
                          GridPolicy default_policy = GridPolicy::midpoint);

// Writes the `# grid:` header plus values at 17 significant digits, which
// round-trips IEEE doubles exactly through load_csv.
void save_csv(const FunctionalSample& sample, const std::string& path,
              char delimiter = ',');

// Subtracts the pointwise sample mean curve. Idempotent.
FunctionalSample center(const FunctionalSample& sample);

// Coefficients of each curve in the orthonormal trigonometric system
// {1, sqrt(2)cos(2 pi m s), sqrt(2)sin(2 pi m s) : m = 1..(n_basis-1)/2}.
struct BasisProjection {
  int n_basis;
  Eigen::MatrixXd coefficients;  // T x n_basis, row t = curve t
};

// Least-squares fit of each curve onto the trigonometric span, using the
// uniform 1/k quadrature rule; solved through the basis Gram matrix so the
// projection is idempotent on any grid, not just the equidistant-midpoint
// one where the discrete basis happens to be exactly orthonormal.
BasisProjection project_fourier(const FunctionalSample& sample, int n_basis);

// Projection re-evaluated on the original grid. n_basis must be odd and at
// most k; n_basis = k reproduces the sample up to round-off.
FunctionalSample fourier_smooth(const FunctionalSample& sample, int n_basis);

}  // namespace specop
