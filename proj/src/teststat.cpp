#include "specop/teststat.hpp"

#include <cmath>

#include "specop/errors.hpp"
#include "specop/numerics.hpp"

namespace specop {

namespace {

constexpr double kDegenerateFloor = 1e-300;

void check_compatible(const SpectralEstimate& fx, const SpectralEstimate& fy) {
  if (fx.length() != fy.length() || fx.grid() != fy.grid() ||
      fx.bandwidth() != fy.bandwidth() || !(fx.kernel() == fy.kernel())) {
    throw ScopeError("estimates disagree on T, grid, bandwidth, or kernel");
  }
}

// Weight 1 at t = 0, weight 2 for t >= 1: folds the symmetric frequency set
// t = -N..N onto the stored half.
double folded_frequency_sum(int N, const std::function<double(int)>& term) {
  std::vector<double> buf(static_cast<std::size_t>(N) + 1);
  buf[0] = term(0);
  for (int t = 1; t <= N; ++t) buf[static_cast<std::size_t>(t)] = 2.0 * term(t);
  return pairwise_sum(buf);
}

}  // namespace

double u_statistic(const SpectralEstimate& fx, const SpectralEstimate& fy) {
  check_compatible(fx, fy);
  const int N = fx.n_frequencies();
  const double total = folded_frequency_sum(N, [&](int t) {
    const Eigen::MatrixXcd diff = fx.slice(t) - fy.slice(t);
    return hs_inner(diff, diff).real();
  });
  return 2.0 * M_PI / fx.length() * total;
}

double mu0_hat(const SpectralEstimate& pool) {
  const int N = pool.n_frequencies();
  const double k = pool.grid_size();
  const double total = folded_frequency_sum(N, [&](int t) {
    const double trace = pool.slice(t).diagonal().real().sum() / k;
    return trace * trace;
  });
  return (2.0 * M_PI / pool.length()) * total * pool.kernel().c_w2() / M_PI;
}

double theta0_hat(const SpectralEstimate& pool) {
  const int N = pool.n_frequencies();
  const double total = folded_frequency_sum(N, [&](int t) {
    const double hs = hs_inner(pool.slice(t), pool.slice(t)).real();
    return hs * hs;
  });
  const double theta_sq =
      4.0 / (M_PI * M_PI) * pool.kernel().c_conv() * (2.0 * M_PI / pool.length()) * total;
  const double theta = std::sqrt(theta_sq);
  if (!(theta > kDegenerateFloor)) {
    throw DegenerateStatisticError(
        "pooled spectral estimate is numerically zero; the studentized statistic "
        "is undefined");
  }
  return theta;
}

double studentize(double u, double mu0, double theta0, double b, int T) {
  if (!(theta0 > 0.0)) {
    throw DegenerateStatisticError("studentize: nonpositive scale constant");
  }
  return (std::sqrt(b) * T * u - mu0 / std::sqrt(b)) / theta0;
}

std::vector<double> q_profile(const SpectralEstimate& fx, const SpectralEstimate& fy,
                              double theta0) {
  check_compatible(fx, fy);
  if (!(theta0 > 0.0)) {
    throw DegenerateStatisticError("q_profile: nonpositive scale constant");
  }
  const int N = fx.n_frequencies();
  const double scale = 2.0 * M_PI * std::sqrt(fx.bandwidth()) / theta0;
  std::vector<double> q(static_cast<std::size_t>(N) + 1);
  for (int j = 0; j <= N; ++j) {
    const Eigen::MatrixXcd diff = fx.slice(j) - fy.slice(j);
    q[static_cast<std::size_t>(j)] = scale * hs_inner(diff, diff).real();
  }
  return q;
}

Eigen::MatrixXd d_map(const SpectralEstimate& fx, const SpectralEstimate& fy,
                      double theta0) {
  check_compatible(fx, fy);
  if (!(theta0 > 0.0)) {
    throw DegenerateStatisticError("d_map: nonpositive scale constant");
  }
  const int N = fx.n_frequencies();
  const int k = fx.grid_size();
  Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(k, k);
  for (int j = 0; j <= N; ++j) {
    const Eigen::MatrixXcd diff = fx.slice(j) - fy.slice(j);
    // |diff| is even in the frequency index, so negative frequencies double
    // every term except j = 0.
    acc += (j == 0 ? 1.0 : 2.0) * diff.cwiseAbs2();
  }
  const double kk = static_cast<double>(k) * static_cast<double>(k);
  return 2.0 * M_PI * std::sqrt(fx.bandwidth()) / (kk * theta0) * acc;
}

TestResult evaluate(const SpectralEstimate& fx, const SpectralEstimate& fy) {
  check_compatible(fx, fy);
  const SpectralEstimate pool = pooled(fx, fy);
  TestResult r;
  r.u_stat = u_statistic(fx, fy);
  r.mu0_hat = mu0_hat(pool);
  r.theta0_hat = theta0_hat(pool);
  r.b = fx.bandwidth();
  r.T = fx.length();
  r.k = fx.grid_size();
  r.t_stat = studentize(r.u_stat, r.mu0_hat, r.theta0_hat, r.b, r.T);
  r.q_profile = q_profile(fx, fy, r.theta0_hat);
  r.d_map = d_map(fx, fy, r.theta0_hat);
  return r;
}

}  // namespace specop
