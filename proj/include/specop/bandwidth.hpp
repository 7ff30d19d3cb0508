#pragma once

#include <vector>

#include "specop/fdata.hpp"
#include "specop/spectral.hpp"

namespace specop {

struct CVResult {
  std::vector<double> b_grid;
  std::vector<double> scores;
  double b_cv = 0.0;
};

// Pooled scalar periodogram of the grid-averaged series at l_t, t = 1..N:
// half the X-average periodogram plus half the Y-average periodogram.
std::vector<double> averaged_periodogram(const FunctionalSample& x,
                                         const FunctionalSample& y);

// Leave-one-out log-likelihood style score
//   CV(b) = N^{-1} sum_{t=1..N} { log g_t + I(l_t) / g_t },
// where g_t smooths the averaged periodogram over s = -N..N with s != +-t
// excluded. Returns +infinity when some g_t is nonpositive (window empty or
// the averaged periodogram vanishes on it); never throws for that.
double cv_score(double b, const FunctionalSample& x, const FunctionalSample& y,
                const WeightKernel& kernel);

// Scores every grid point and returns the argmin; ties go to the smaller
// bandwidth. Throws DegenerateStatisticError when no grid point yields a
// finite score.
CVResult select_bandwidth(const FunctionalSample& x, const FunctionalSample& y,
                          const std::vector<double>& b_grid, const WeightKernel& kernel);

// 25 log-spaced points spanning [0.02, 0.6].
std::vector<double> default_bandwidth_grid();

namespace detail {
// Score from a precomputed averaged periodogram over t = 0..N (index 0 is
// needed because smoothing windows of small t reach frequency zero).
double cv_score_from(const std::vector<double>& avg_pg, int T, double b,
                     const WeightKernel& kernel);

// Index of the smallest finite score, scanning ascending so exact ties land
// on the earlier (smaller-bandwidth) entry; scores.size() if none is finite.
std::size_t argmin_tie_smaller(const std::vector<double>& scores);
}  // namespace detail

}  // namespace specop
