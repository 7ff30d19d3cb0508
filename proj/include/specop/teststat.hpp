#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "specop/spectral.hpp"

namespace specop {

// Everything the two-sample spectral comparison produces for one data pair.
// p_value stays empty until a bootstrap calibration has run.
struct TestResult {
  double u_stat = 0.0;
  double mu0_hat = 0.0;
  double theta0_hat = 0.0;
  double t_stat = 0.0;
  double b = 0.0;
  int T = 0;
  int k = 0;
  std::vector<double> q_profile;  // per-frequency contribution, j = 0..N
  Eigen::MatrixXd d_map;          // k x k location contribution
  std::optional<double> p_value;
};

// Integrated squared distance between the two estimates:
// (2 pi / T) * sum_{t=-N..N} ||f_x - f_y||_HS^2 at l_t, folded onto t >= 0
// by conjugate symmetry. Nonnegative; zero iff the estimates coincide.
double u_statistic(const SpectralEstimate& fx, const SpectralEstimate& fy);

// Centering constant of the studentized statistic, evaluated on the pooled
// estimate: (1/pi) * [(2 pi / T) sum_t trace_t^2] * c_w2, with
// trace_t = k^{-1} sum_i f_t(s_i, s_i).
double mu0_hat(const SpectralEstimate& pool);

// Scale constant: sqrt( (4/pi^2) * c_conv * (2 pi / T) sum_t <f_t, f_t>_HS^2 ).
// Throws DegenerateStatisticError when the result is <= 1e-300, i.e. the
// pooled estimate is numerically zero and no finite statistic exists.
double theta0_hat(const SpectralEstimate& pool);

// t = (sqrt(b) T u - mu0 / sqrt(b)) / theta0.
double studentize(double u, double mu0, double theta0, double b, int T);

// Per-frequency share of the distance: 2 pi sqrt(b) ||f_x - f_y||_HS^2 / theta0
// at l_j, j = 0..N. Summed over the full symmetric frequency set this
// reproduces sqrt(b) T u / theta0.
std::vector<double> q_profile(const SpectralEstimate& fx, const SpectralEstimate& fy,
                              double theta0);

// Per-location share: (2 pi sqrt(b) / k^2) sum_{j=-N..N} |f_x - f_y|^2(s_r, s_l)
// / theta0. Its total over (r, l) equals the full-frequency q_profile sum.
Eigen::MatrixXd d_map(const SpectralEstimate& fx, const SpectralEstimate& fy,
                      double theta0);

// Full evaluation minus the bootstrap: statistic, studentization constants,
// and both diagnostic decompositions.
TestResult evaluate(const SpectralEstimate& fx, const SpectralEstimate& fy);

}  // namespace specop
