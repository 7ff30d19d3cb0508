#pragma once

#include <functional>
#include <span>
#include <vector>

namespace specop {

double mean(std::span<const double> v);

// Population variance (divides by n).
double variance(std::span<const double> v);

// Standardized third central moment, m3 / m2^(3/2).
double skewness(std::span<const double> v);

// m4 / m2^2 - 3.
double excess_kurtosis(std::span<const double> v);

// Phi(x) for the standard normal.
double normal_cdf(double x);

// sup_x |F_n(x) - F(x)| against a continuous reference CDF.
double ks_statistic(std::vector<double> sample, const std::function<double(double)>& cdf);

// sup_x |F_n(x) - G_m(x)| for two samples.
double ks_two_sample(std::vector<double> a, std::vector<double> b);

}  // namespace specop
