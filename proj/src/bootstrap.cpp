#include "specop/bootstrap.hpp"

#include <algorithm>
#include <cmath>

#include "specop/errors.hpp"
#include "specop/parallel.hpp"

namespace specop {

std::vector<FrequencyFactor> factorize(const SpectralEstimate& pool) {
  const int N = pool.n_frequencies();
  std::vector<FrequencyFactor> factors;
  factors.reserve(static_cast<std::size_t>(N));
  for (int t = 1; t <= N; ++t) {
    const Eigen::MatrixXcd& s = pool.slice(t);
    const double scale = std::max(1e-30, s.cwiseAbs().maxCoeff());
    if ((s - s.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
      throw ContractViolation("factorize: slice " + std::to_string(t) +
                              " is not Hermitian within tolerance");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(0.5 * (s + s.adjoint()));
    if (eig.info() != Eigen::Success) {
      throw ContractViolation("factorize: eigendecomposition failed at slice " +
                              std::to_string(t));
    }
    const Eigen::VectorXd roots = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    // Hermitian square root U diag(sqrt(eig)) U^H: basis-independent, and a
    // diagonal input yields the elementwise-root diagonal factor.
    Eigen::MatrixXcd L = eig.eigenvectors() * roots.asDiagonal() *
                         eig.eigenvectors().adjoint();
    factors.push_back(FrequencyFactor{t, std::move(L)});
  }
  return factors;
}

Eigen::VectorXcd draw_coefficients(const FrequencyFactor& factor, GaussianSampler& rng) {
  const auto k = factor.factor.rows();
  Eigen::VectorXcd z(k);
  for (Eigen::Index i = 0; i < k; ++i) {
    const double re = rng() * M_SQRT1_2;
    const double im = rng() * M_SQRT1_2;
    z(i) = std::complex<double>(re, im);
  }
  return factor.factor * z;
}

namespace {

ReplicateDraw replicate_once(const std::vector<FrequencyFactor>& factors, const Grid& grid,
                             int T, double b, const WeightKernel& kernel,
                             FrequencyWrap wrap, StudentizationMode mode,
                             double mu0_sample, double theta0_sample,
                             GaussianSampler& rng) {
  const int N = static_cast<int>(factors.size());
  const int k = grid.size();

  std::vector<Eigen::MatrixXcd> px(static_cast<std::size_t>(N) + 1);
  std::vector<Eigen::MatrixXcd> py(static_cast<std::size_t>(N) + 1);
  px[0] = Eigen::MatrixXcd::Zero(k, k);
  py[0] = Eigen::MatrixXcd::Zero(k, k);
  for (int t = 1; t <= N; ++t) {
    const Eigen::VectorXcd jx = draw_coefficients(factors[static_cast<std::size_t>(t - 1)], rng);
    const Eigen::VectorXcd jy = draw_coefficients(factors[static_cast<std::size_t>(t - 1)], rng);
    px[static_cast<std::size_t>(t)] = jx * jx.adjoint();
    py[static_cast<std::size_t>(t)] = jy * jy.adjoint();
  }

  SpectralEstimate fx(grid, T, b, kernel, smooth_slices(px, T, b, kernel, wrap));
  SpectralEstimate fy(grid, T, b, kernel, smooth_slices(py, T, b, kernel, wrap));

  ReplicateDraw d;
  d.u_star = u_statistic(fx, fy);
  if (mode == StudentizationMode::full) {
    const SpectralEstimate pool = pooled(fx, fy);
    d.mu0_star = mu0_hat(pool);
    d.theta0_star = theta0_hat(pool);  // may throw DegenerateStatisticError
  } else {
    d.mu0_star = mu0_sample;
    d.theta0_star = theta0_sample;
  }
  d.t_star = studentize(d.u_star, d.mu0_star, d.theta0_star, b, T);
  return d;
}

}  // namespace

ReplicateDraw replicate(const std::vector<FrequencyFactor>& factors, const Grid& grid,
                        int T, double b, const WeightKernel& kernel, FrequencyWrap wrap,
                        StudentizationMode mode, double mu0_sample, double theta0_sample,
                        const RngStream& stream) {
  for (int attempt = 0;; ++attempt) {
    GaussianSampler rng(stream.child(static_cast<std::uint64_t>(attempt)));
    try {
      return replicate_once(factors, grid, T, b, kernel, wrap, mode, mu0_sample,
                            theta0_sample, rng);
    } catch (const DegenerateStatisticError&) {
      if (attempt >= 1) throw;
    }
  }
}

BootstrapRun run_stream(const FunctionalSample& x, const FunctionalSample& y, double b,
                        const WeightKernel& kernel, const BootstrapPlan& plan,
                        const RngStream& stream, FrequencyWrap wrap) {
  if (plan.B < 1) throw ContractViolation("bootstrap: B must be >= 1");
  if (!x.centered() || !y.centered()) {
    throw ContractViolation("bootstrap: both samples must be centered first");
  }
  if (x.length() != y.length()) {
    throw ScopeError("bootstrap: samples must have equal length (got " +
                     std::to_string(x.length()) + " and " + std::to_string(y.length()) +
                     "); unequal designs are out of scope");
  }
  if (x.grid() != y.grid()) {
    throw ScopeError("bootstrap: samples must share one evaluation grid");
  }

  const SpectralEstimate fx = smooth(dft_frame(x), b, kernel, wrap);
  const SpectralEstimate fy = smooth(dft_frame(y), b, kernel, wrap);
  TestResult result = evaluate(fx, fy);

  const SpectralEstimate pool = pooled(fx, fy);
  const std::vector<FrequencyFactor> factors = factorize(pool);

  std::vector<ReplicateDraw> draws(static_cast<std::size_t>(plan.B));
  parallel_for(plan.B, plan.workers, [&](int i) {
    draws[static_cast<std::size_t>(i)] =
        replicate(factors, x.grid(), x.length(), b, kernel, wrap, plan.studentization,
                  result.mu0_hat, result.theta0_hat, stream.child(static_cast<std::uint64_t>(i)));
  });

  BootstrapDistribution dist;
  dist.t_star.resize(draws.size());
  dist.mu0_star.resize(draws.size());
  dist.theta0_star.resize(draws.size());
  int exceed = 0;
  for (std::size_t i = 0; i < draws.size(); ++i) {
    dist.t_star[i] = draws[i].t_star;
    dist.mu0_star[i] = draws[i].mu0_star;
    dist.theta0_star[i] = draws[i].theta0_star;
    if (draws[i].t_star >= result.t_stat) ++exceed;
  }
  dist.t_star_sorted = dist.t_star;
  std::sort(dist.t_star_sorted.begin(), dist.t_star_sorted.end());

  result.p_value = (1.0 + exceed) / (plan.B + 1.0);
  return BootstrapRun{std::move(result), std::move(dist)};
}

BootstrapRun run(const FunctionalSample& x, const FunctionalSample& y, double b,
                 const WeightKernel& kernel, const BootstrapPlan& plan, FrequencyWrap wrap) {
  return run_stream(x, y, b, kernel, plan, RngStream::root(plan.master_seed), wrap);
}

}  // namespace specop
