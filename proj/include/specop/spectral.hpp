#pragma once

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "specop/fdata.hpp"
#include "specop/grid.hpp"

namespace specop {

// Smoothing weight W on [-pi, pi]: bounded, symmetric, nonnegative, and
// integrating to 2*pi. The evaluator returns 0 outside the support. The two
// moment constants are fixed at construction by adaptive quadrature:
//   c_w2  = integral of W(u)^2 over [-pi, pi]
//   c_conv = integral over [-2pi, 2pi] of (W convolved with W)(x)^2
class WeightKernel {
 public:
  static WeightKernel epanechnikov();  // W(x) = (3/2)(1 - (x/pi)^2)
  static WeightKernel bartlett();      // W(x) = 2(1 - |x|/pi)
  static WeightKernel flat();          // W(x) = 1 (not Lipschitz at the edge)

  // Registry lookup for CLI/config use: "epanechnikov-2pi" (alias
  // "epanechnikov"), "bartlett", "flat". Unknown name -> contract violation.
  static WeightKernel by_name(const std::string& name);

  // Validates symmetry, nonnegativity, and the 2*pi mass at construction.
  static WeightKernel make(std::string name, std::function<double(double)> density);

  double operator()(double x) const { return density_(x); }
  [[nodiscard]] const std::string& name() const { return name_; }
  [[nodiscard]] double c_w2() const { return c_w2_; }
  [[nodiscard]] double c_conv() const { return c_conv_; }

  bool operator==(const WeightKernel& other) const { return name_ == other.name_; }

 private:
  WeightKernel(std::string name, std::function<double(double)> density, double c_w2,
               double c_conv);
  std::string name_;
  std::function<double(double)> density_;
  double c_w2_;
  double c_conv_;
};

// Whether the smoothing window is truncated at +-pi (none) or the frequency
// distance is reduced modulo 2*pi (periodic).
enum class FrequencyWrap { none, periodic };

// Finite Fourier transforms J_t(s_j) = (2 pi T)^{-1/2} sum_u x_u(s_j) e^{-i u l_t}
// at the nonnegative Fourier frequencies l_t = 2 pi t / T, t = 0..N with
// N = floor((T-1)/2). Negative frequencies follow by conjugation.
class DftFrame {
 public:
  DftFrame(Grid grid, int T, Eigen::MatrixXcd coefficients);

  [[nodiscard]] int length() const { return T_; }
  [[nodiscard]] int n_frequencies() const { return static_cast<int>(coefficients_.rows()) - 1; }
  [[nodiscard]] double frequency(int t) const { return 2.0 * M_PI * t / T_; }
  [[nodiscard]] const Eigen::MatrixXcd& coefficients() const { return coefficients_; }
  [[nodiscard]] const Grid& grid() const { return grid_; }

 private:
  Grid grid_;
  int T_;
  Eigen::MatrixXcd coefficients_;  // (N+1) x k
};

DftFrame dft_frame(const FunctionalSample& sample);

// Rank-one kernel p_t(s_i, s_j) = J_t(s_i) * conj(J_t(s_j)), 0 <= t <= N.
Eigen::MatrixXcd periodogram(const DftFrame& frame, int t);

// All periodogram slices for t = 0..N.
std::vector<Eigen::MatrixXcd> periodogram_slices(const DftFrame& frame);

// Kernel-smoothed spectral density operator estimate on the Fourier grid.
class SpectralEstimate {
 public:
  SpectralEstimate(Grid grid, int T, double b, WeightKernel kernel,
                   std::vector<Eigen::MatrixXcd> slices);

  [[nodiscard]] int length() const { return T_; }
  [[nodiscard]] int n_frequencies() const { return static_cast<int>(slices_.size()) - 1; }
  [[nodiscard]] int grid_size() const { return grid_.size(); }
  [[nodiscard]] double bandwidth() const { return b_; }
  [[nodiscard]] const WeightKernel& kernel() const { return kernel_; }
  [[nodiscard]] const Grid& grid() const { return grid_; }
  [[nodiscard]] double frequency(int t) const { return 2.0 * M_PI * t / T_; }
  [[nodiscard]] const Eigen::MatrixXcd& slice(int t) const {
    return slices_[static_cast<std::size_t>(t)];
  }
  [[nodiscard]] const std::vector<Eigen::MatrixXcd>& slices() const { return slices_; }

 private:
  Grid grid_;
  int T_;
  double b_;
  WeightKernel kernel_;
  std::vector<Eigen::MatrixXcd> slices_;  // t = 0..N, each k x k
};

// Weighted moving average over the frequency index:
//   out_u = (bT)^{-1} sum_{t=-N..N} W((l_u - l_t)/b) p_|t| (conjugated for t<0),
// for u = 0..N. `slices` holds t = 0..N. With wrap = periodic the distance
// is reduced into (-pi, pi] first. Window width must satisfy 0 < b < pi.
std::vector<Eigen::MatrixXcd> smooth_slices(const std::vector<Eigen::MatrixXcd>& slices,
                                            int T, double b, const WeightKernel& kernel,
                                            FrequencyWrap wrap);

SpectralEstimate smooth(const DftFrame& frame, double b, const WeightKernel& kernel,
                        FrequencyWrap wrap = FrequencyWrap::none);

// Elementwise average (f_x + f_y) / 2. Metadata must match exactly.
SpectralEstimate pooled(const SpectralEstimate& fx, const SpectralEstimate& fy);

// Discretized Hilbert-Schmidt inner product k^{-2} sum_{i,j} a_ij conj(b_ij).
std::complex<double> hs_inner(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b);

// Raw periodogram of the grid-averaged scalar series v_u = k^{-1} sum_j
// x_u(s_j), one value per frequency t = 0..N. Equals k^{-2} sum_{i,j} of the
// periodogram slices up to round-off.
std::vector<double> integrated_scalar_periodogram(const FunctionalSample& sample);

// Smoothed spectral density of the grid-averaged scalar series, t = 0..N.
// Equals k^{-2} sum_{i,j} of the full estimate's slices up to round-off;
// cheap single-channel diagnostic of the low-frequency behaviour.
std::vector<double> integrated_scalar_estimate(const FunctionalSample& sample, double b,
                                               const WeightKernel& kernel,
                                               FrequencyWrap wrap = FrequencyWrap::none);

}  // namespace specop
