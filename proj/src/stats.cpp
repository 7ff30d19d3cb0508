#include "specop/stats.hpp"

#include <algorithm>
#include <cmath>

#include "specop/errors.hpp"
#include "specop/numerics.hpp"

namespace specop {

namespace {

std::vector<double> central_powers(std::span<const double> v, double m, int p) {
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = std::pow(v[i] - m, p);
  return out;
}

double central_moment(std::span<const double> v, double m, int p) {
  const auto powers = central_powers(v, m, p);
  return pairwise_sum(powers) / static_cast<double>(v.size());
}

}  // namespace

double mean(std::span<const double> v) {
  if (v.empty()) throw ContractViolation("mean: empty sample");
  return pairwise_sum(v) / static_cast<double>(v.size());
}

double variance(std::span<const double> v) {
  return central_moment(v, mean(v), 2);
}

double skewness(std::span<const double> v) {
  if (v.size() < 2) throw ContractViolation("skewness: need at least 2 values");
  const double m = mean(v);
  const double m2 = central_moment(v, m, 2);
  if (m2 <= 0.0) throw DegenerateStatisticError("skewness: zero variance");
  return central_moment(v, m, 3) / std::pow(m2, 1.5);
}

double excess_kurtosis(std::span<const double> v) {
  if (v.size() < 2) throw ContractViolation("excess_kurtosis: need at least 2 values");
  const double m = mean(v);
  const double m2 = central_moment(v, m, 2);
  if (m2 <= 0.0) throw DegenerateStatisticError("excess_kurtosis: zero variance");
  return central_moment(v, m, 4) / (m2 * m2) - 3.0;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x * M_SQRT1_2); }

double ks_statistic(std::vector<double> sample, const std::function<double(double)>& cdf) {
  if (sample.empty()) throw ContractViolation("ks_statistic: empty sample");
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double f = cdf(sample[i]);
    d = std::max(d, std::abs(f - static_cast<double>(i) / n));
    d = std::max(d, std::abs(static_cast<double>(i + 1) / n - f));
  }
  return d;
}

double ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw ContractViolation("ks_two_sample: empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  double d = 0.0;
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

}  // namespace specop
