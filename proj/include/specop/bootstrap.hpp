#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "specop/rng.hpp"
#include "specop/spectral.hpp"
#include "specop/teststat.hpp"

namespace specop {

// Which centering/scale constants studentize the replicates: `full`
// recomputes them from each replicate's own pooled estimate; `plugin` reuses
// the sample-level constants (cheaper, slightly less adaptive).
enum class StudentizationMode { full, plugin };

struct BootstrapPlan {
  int B = 1000;
  std::uint64_t master_seed = 0;
  int workers = 0;  // 0 = hardware concurrency
  StudentizationMode studentization = StudentizationMode::full;
};

// Square root of one pooled slice: factor * factor^H reproduces the slice
// with negative eigenvalues clamped to zero (the PSD projection).
struct FrequencyFactor {
  int frequency_index;
  Eigen::MatrixXcd factor;
};

// Factors for t = 1..N. Slices must be Hermitian within 1e-12 of their scale;
// eigenvalue clamping absorbs the small negative round-off modes that
// kernel-smoothed estimates can carry.
std::vector<FrequencyFactor> factorize(const SpectralEstimate& pool);

// One draw J = factor * z where z has independent complex-normal entries of
// unit variance (real and imaginary parts each N(0, 1/2)), so that
// E[J J^H] = factor * factor^H and E[J J^T] = 0.
Eigen::VectorXcd draw_coefficients(const FrequencyFactor& factor, GaussianSampler& rng);

struct ReplicateDraw {
  double u_star = 0.0;
  double mu0_star = 0.0;
  double theta0_star = 0.0;
  double t_star = 0.0;
};

// One synthetic two-sample draw from the pooled estimate: independent
// coefficient vectors at t = 1..N for each pseudo-sample (t = 0 pinned to
// zero), rank-one slices, the same smoothing as the data fit, and the
// studentized statistic. A degenerate replicate is redrawn once from the
// next substream; a second failure propagates as the data-level error.
ReplicateDraw replicate(const std::vector<FrequencyFactor>& factors, const Grid& grid,
                        int T, double b, const WeightKernel& kernel, FrequencyWrap wrap,
                        StudentizationMode mode, double mu0_sample, double theta0_sample,
                        const RngStream& stream);

struct BootstrapDistribution {
  std::vector<double> t_star;         // replicate order
  std::vector<double> t_star_sorted;  // ascending copy
  std::vector<double> mu0_star;
  std::vector<double> theta0_star;
};

struct BootstrapRun {
  TestResult result;  // p_value populated
  BootstrapDistribution distribution;
};

// Full calibrated test on two centered samples of equal length and grid.
// Replicate i draws from substream child(i) of the plan's master seed, so
// the outcome is a pure function of (inputs, master_seed) for any worker
// count. p = (1 + #{t* >= t}) / (B + 1).
BootstrapRun run(const FunctionalSample& x, const FunctionalSample& y, double b,
                 const WeightKernel& kernel, const BootstrapPlan& plan,
                 FrequencyWrap wrap = FrequencyWrap::none);

// Same, but drawing replicate substreams from an externally supplied stream
// (the plan's master_seed is ignored). Lets a simulation harness give every
// repetition its own disjoint bootstrap stream.
BootstrapRun run_stream(const FunctionalSample& x, const FunctionalSample& y, double b,
                        const WeightKernel& kernel, const BootstrapPlan& plan,
                        const RngStream& stream, FrequencyWrap wrap = FrequencyWrap::none);

}  // namespace specop
