#include "specop/bandwidth.hpp"

#include <cmath>
#include <limits>

#include "specop/errors.hpp"
#include "specop/numerics.hpp"

namespace specop {

namespace {

void check_pair(const FunctionalSample& x, const FunctionalSample& y) {
  if (x.length() != y.length()) {
    throw ScopeError("bandwidth selection: samples must have equal length");
  }
  if (x.grid() != y.grid()) {
    throw ScopeError("bandwidth selection: samples must share one evaluation grid");
  }
}

// t = 0..N. Equals k^{-2} sum_{r,s} of the pooled periodogram slices, folded
// through the scalar identity: the row-mean series carries exactly the
// grid-averaged Fourier coefficients.
std::vector<double> averaged_periodogram_full(const FunctionalSample& x,
                                              const FunctionalSample& y) {
  const int T = x.length();
  const int N = (T - 1) / 2;
  const auto ix = integrated_scalar_periodogram(x);
  const auto iy = integrated_scalar_periodogram(y);
  std::vector<double> avg(static_cast<std::size_t>(N) + 1);
  for (int t = 0; t <= N; ++t) {
    avg[static_cast<std::size_t>(t)] =
        0.5 * ix[static_cast<std::size_t>(t)] + 0.5 * iy[static_cast<std::size_t>(t)];
  }
  return avg;
}

}  // namespace

std::vector<double> averaged_periodogram(const FunctionalSample& x,
                                         const FunctionalSample& y) {
  check_pair(x, y);
  auto full = averaged_periodogram_full(x, y);
  return std::vector<double>(full.begin() + 1, full.end());
}

namespace detail {

std::size_t argmin_tie_smaller(const std::vector<double>& scores) {
  std::size_t best = scores.size();
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (std::isfinite(scores[i]) && (best == scores.size() || scores[i] < scores[best])) {
      best = i;
    }
  }
  return best;
}

double cv_score_from(const std::vector<double>& avg_pg, int T, double b,
                     const WeightKernel& kernel) {
  if (!(b > 0.0 && b < M_PI)) {
    throw ContractViolation("cv_score: bandwidth must lie in (0, pi)");
  }
  const int N = static_cast<int>(avg_pg.size()) - 1;
  if (N < 1) throw ContractViolation("cv_score: need at least one interior frequency");

  const double step = 2.0 * M_PI / T;
  const int hw = std::min(2 * N, static_cast<int>(std::floor(b * T / 2.0 + 1e-12)));
  std::vector<double> w(static_cast<std::size_t>(hw) + 1);
  for (int d = 0; d <= hw; ++d) w[static_cast<std::size_t>(d)] = kernel(d * step / b);

  std::vector<double> terms(static_cast<std::size_t>(N));
  for (int t = 1; t <= N; ++t) {
    const int lo = std::max(t - hw, -N);
    const int hi = std::min(t + hw, N);
    double g = 0.0;
    for (int s = lo; s <= hi; ++s) {
      if (s == t || s == -t) continue;
      g += w[static_cast<std::size_t>(std::abs(t - s))] * avg_pg[static_cast<std::size_t>(std::abs(s))];
    }
    g /= b * T;
    if (!(g > 0.0)) return std::numeric_limits<double>::infinity();
    terms[static_cast<std::size_t>(t - 1)] = std::log(g) + avg_pg[static_cast<std::size_t>(t)] / g;
  }
  return pairwise_sum(terms) / N;
}

}  // namespace detail

double cv_score(double b, const FunctionalSample& x, const FunctionalSample& y,
                const WeightKernel& kernel) {
  check_pair(x, y);
  return detail::cv_score_from(averaged_periodogram_full(x, y), x.length(), b, kernel);
}

CVResult select_bandwidth(const FunctionalSample& x, const FunctionalSample& y,
                          const std::vector<double>& b_grid, const WeightKernel& kernel) {
  check_pair(x, y);
  if (b_grid.empty()) throw ContractViolation("select_bandwidth: empty grid");
  double prev = 0.0;
  for (double b : b_grid) {
    if (!(b > 0.0 && b < M_PI)) {
      throw ContractViolation("select_bandwidth: grid values must lie in (0, pi)");
    }
    if (!(b > prev)) throw ContractViolation("select_bandwidth: grid must be ascending");
    prev = b;
  }

  const auto avg = averaged_periodogram_full(x, y);
  CVResult res;
  res.b_grid = b_grid;
  res.scores.resize(b_grid.size());
  for (std::size_t i = 0; i < b_grid.size(); ++i) {
    res.scores[i] = detail::cv_score_from(avg, x.length(), b_grid[i], kernel);
  }
  const std::size_t best = detail::argmin_tie_smaller(res.scores);
  if (best == b_grid.size()) {
    throw DegenerateStatisticError(
        "no bandwidth on the grid yields a finite cross-validation score");
  }
  res.b_cv = b_grid[best];
  return res;
}

std::vector<double> default_bandwidth_grid() {
  constexpr int n = 25;
  constexpr double lo = 0.02;
  constexpr double hi = 0.6;
  std::vector<double> grid(n);
  const double llo = std::log(lo);
  const double lhi = std::log(hi);
  for (int i = 0; i < n; ++i) grid[static_cast<std::size_t>(i)] = std::exp(llo + (lhi - llo) * i / (n - 1));
  grid.front() = lo;
  grid.back() = hi;
  return grid;
}

}  // namespace specop
