#pragma once

#include <vector>

namespace specop {

enum class GridPolicy { midpoint, endpoint };

// Ordered evaluation points in [0, 1], shared by every curve of a sample.
// All [0,1]-integrals over a grid use the uniform Riemann weight 1/k, so the
// point layout matters only where actual coordinates enter (simulation
// covariances, basis evaluation, plot output).
class Grid {
 public:
  // s_j = (2j-1)/(2k), j = 1..k. Excludes the endpoints, which is the safe
  // default for bridge-type innovations that vanish at 0 and 1.
  static Grid midpoints(int k);

  // s_j = (j-1)/(k-1), j = 1..k, k >= 2. Includes 0 and 1.
  static Grid endpoints(int k);

  static Grid make(GridPolicy policy, int k);

  // Custom coordinates: strictly ascending, within [0, 1].
  explicit Grid(std::vector<double> points);

  [[nodiscard]] int size() const { return static_cast<int>(points_.size()); }
  [[nodiscard]] double point(int j) const { return points_[static_cast<std::size_t>(j)]; }
  [[nodiscard]] const std::vector<double>& points() const { return points_; }

  bool operator==(const Grid& other) const { return points_ == other.points_; }
  bool operator!=(const Grid& other) const { return !(*this == other); }

 private:
  std::vector<double> points_;
};

}  // namespace specop
