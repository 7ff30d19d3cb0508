#include "specop/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <memory>
#include <mutex>

#include "specop/errors.hpp"
#include "specop/numerics.hpp"

namespace specop {

namespace {

// FFTW plan creation/destruction is not thread-safe; execution is.
std::mutex& fftw_mutex() {
  static std::mutex m;
  return m;
}

class RealDft {
 public:
  explicit RealDft(int n) : n_(n) {
    std::lock_guard<std::mutex> lock(fftw_mutex());
    in_ = fftw_alloc_real(static_cast<std::size_t>(n));
    out_ = fftw_alloc_complex(static_cast<std::size_t>(n / 2 + 1));
    plan_ = fftw_plan_dft_r2c_1d(n, in_, out_, FFTW_ESTIMATE);
  }

  RealDft(const RealDft&) = delete;
  RealDft& operator=(const RealDft&) = delete;

  ~RealDft() {
    std::lock_guard<std::mutex> lock(fftw_mutex());
    fftw_destroy_plan(plan_);
    fftw_free(in_);
    fftw_free(out_);
  }

  // dst[t] = sum_{v=0..n-1} src[v] e^{-2 pi i t v / n}, t = 0..n/2.
  void transform(const double* src, std::complex<double>* dst) {
    std::copy(src, src + n_, in_);
    fftw_execute(plan_);
    for (int t = 0; t <= n_ / 2; ++t) {
      dst[t] = std::complex<double>(out_[t][0], out_[t][1]);
    }
  }

 private:
  int n_;
  double* in_;
  fftw_complex* out_;
  fftw_plan plan_;
};

void validate_kernel_shape(const std::string& name, const std::function<double(double)>& w,
                           double mass) {
  for (int i = 0; i <= 256; ++i) {
    const double x = M_PI * i / 256.0;
    const double wp = w(x);
    const double wn = w(-x);
    if (!(std::isfinite(wp) && std::isfinite(wn))) {
      throw ContractViolation("weight kernel '" + name + "' is not finite on [-pi, pi]");
    }
    if (wp < 0.0 || wn < 0.0) {
      throw ContractViolation("weight kernel '" + name + "' is negative");
    }
    if (std::abs(wp - wn) > 1e-12 * (1.0 + std::abs(wp))) {
      throw ContractViolation("weight kernel '" + name + "' is not symmetric");
    }
  }
  if (std::abs(mass - 2.0 * M_PI) > 1e-8) {
    throw ContractViolation("weight kernel '" + name + "' does not integrate to 2*pi");
  }
}

}  // namespace

WeightKernel::WeightKernel(std::string name, std::function<double(double)> density,
                           double c_w2, double c_conv)
    : name_(std::move(name)), density_(std::move(density)), c_w2_(c_w2), c_conv_(c_conv) {}

WeightKernel WeightKernel::make(std::string name, std::function<double(double)> density) {
  const double mass = adaptive_simpson(density, -M_PI, M_PI, 1e-10);
  validate_kernel_shape(name, density, mass);
  const double c_w2 = adaptive_simpson([&](double u) { const double w = density(u); return w * w; },
                                       -M_PI, M_PI, 1e-10);
  // The product density(u) * density(u - x) lives on the overlap of the two
  // supports. Integrating exactly that range matters near |x| = 2*pi, where
  // the overlap is a sliver that a sampler of the full [-pi, pi] span misses.
  auto conv = [&](double x) {
    const double lo = std::max(-M_PI, x - M_PI);
    const double hi = std::min(M_PI, x + M_PI);
    if (lo >= hi) return 0.0;
    return adaptive_simpson([&](double u) { return density(u) * density(u - x); }, lo, hi,
                            1e-10);
  };
  const double c_conv = adaptive_simpson([&](double x) { const double c = conv(x); return c * c; },
                                         -2.0 * M_PI, 2.0 * M_PI, 1e-8);
  if (!(c_w2 > 0.0) || !(c_conv > 0.0)) {
    throw ContractViolation("weight kernel '" + name + "' has degenerate moment constants");
  }
  return WeightKernel(std::move(name), std::move(density), c_w2, c_conv);
}

WeightKernel WeightKernel::epanechnikov() {
  return make("epanechnikov-2pi", [](double x) {
    if (std::abs(x) > M_PI) return 0.0;
    const double r = x / M_PI;
    return 1.5 * (1.0 - r * r);
  });
}

WeightKernel WeightKernel::bartlett() {
  return make("bartlett", [](double x) {
    if (std::abs(x) > M_PI) return 0.0;
    return 2.0 * (1.0 - std::abs(x) / M_PI);
  });
}

WeightKernel WeightKernel::flat() {
  return make("flat", [](double x) { return std::abs(x) > M_PI ? 0.0 : 1.0; });
}

WeightKernel WeightKernel::by_name(const std::string& name) {
  if (name == "epanechnikov-2pi" || name == "epanechnikov") return epanechnikov();
  if (name == "bartlett") return bartlett();
  if (name == "flat") return flat();
  throw ContractViolation("unknown weight kernel '" + name +
                          "' (known: epanechnikov-2pi, bartlett, flat)");
}

DftFrame::DftFrame(Grid grid, int T, Eigen::MatrixXcd coefficients)
    : grid_(std::move(grid)), T_(T), coefficients_(std::move(coefficients)) {
  if (T_ < 1) throw ContractViolation("DftFrame: T must be positive");
  const int N = (T_ - 1) / 2;
  if (coefficients_.rows() != N + 1 || coefficients_.cols() != grid_.size()) {
    throw ContractViolation("DftFrame: coefficient shape does not match T and grid");
  }
}

DftFrame dft_frame(const FunctionalSample& sample) {
  const int T = sample.length();
  const int k = sample.grid_size();
  const int N = (T - 1) / 2;
  const double scale = 1.0 / std::sqrt(2.0 * M_PI * T);

  // J(t, j) = scale * e^{-i l_t} * DFT_t(column j); the phase shift accounts
  // for time indices running from 1, not 0.
  Eigen::VectorXcd phase(N + 1);
  for (int t = 0; t <= N; ++t) {
    phase(t) = std::polar(scale, -2.0 * M_PI * t / T);
  }

  RealDft dft(T);
  std::vector<std::complex<double>> freq(static_cast<std::size_t>(T / 2 + 1));
  Eigen::MatrixXcd coef(N + 1, k);
  for (int j = 0; j < k; ++j) {
    dft.transform(sample.values().col(j).data(), freq.data());
    for (int t = 0; t <= N; ++t) coef(t, j) = phase(t) * freq[static_cast<std::size_t>(t)];
  }
  return DftFrame(sample.grid(), T, std::move(coef));
}

Eigen::MatrixXcd periodogram(const DftFrame& frame, int t) {
  if (t < 0 || t > frame.n_frequencies()) {
    throw ContractViolation("periodogram: frequency index " + std::to_string(t) +
                            " outside 0.." + std::to_string(frame.n_frequencies()));
  }
  const Eigen::VectorXcd v = frame.coefficients().row(t).transpose();
  return v * v.adjoint();
}

std::vector<Eigen::MatrixXcd> periodogram_slices(const DftFrame& frame) {
  std::vector<Eigen::MatrixXcd> out;
  out.reserve(static_cast<std::size_t>(frame.n_frequencies() + 1));
  for (int t = 0; t <= frame.n_frequencies(); ++t) out.push_back(periodogram(frame, t));
  return out;
}

SpectralEstimate::SpectralEstimate(Grid grid, int T, double b, WeightKernel kernel,
                                   std::vector<Eigen::MatrixXcd> slices)
    : grid_(std::move(grid)), T_(T), b_(b), kernel_(std::move(kernel)),
      slices_(std::move(slices)) {
  if (T_ < 1) throw ContractViolation("SpectralEstimate: T must be positive");
  if (!(b_ > 0.0 && b_ < M_PI)) {
    throw ContractViolation("SpectralEstimate: bandwidth must lie in (0, pi)");
  }
  const int N = (T_ - 1) / 2;
  if (static_cast<int>(slices_.size()) != N + 1) {
    throw ContractViolation("SpectralEstimate: slice count does not match T");
  }
  for (const auto& s : slices_) {
    if (s.rows() != grid_.size() || s.cols() != grid_.size()) {
      throw ContractViolation("SpectralEstimate: slice shape does not match grid");
    }
  }
}

std::vector<Eigen::MatrixXcd> smooth_slices(const std::vector<Eigen::MatrixXcd>& slices,
                                            int T, double b, const WeightKernel& kernel,
                                            FrequencyWrap wrap) {
  if (!(b > 0.0 && b < M_PI)) {
    throw ContractViolation("smooth: bandwidth must lie in (0, pi)");
  }
  if (slices.empty()) throw ContractViolation("smooth: no slices");
  const int N = static_cast<int>(slices.size()) - 1;
  const auto k = slices[0].rows();
  const double step = 2.0 * M_PI / T;
  const double inv = 1.0 / (b * T);

  std::vector<Eigen::MatrixXcd> out(slices.size());

  if (wrap == FrequencyWrap::none) {
    // W vanishes outside [-pi, pi], so only |u - t| <= bT/2 contributes.
    const int hw = std::min(2 * N, static_cast<int>(std::floor(b * T / 2.0 + 1e-12)));
    std::vector<double> w(static_cast<std::size_t>(hw) + 1);
    for (int d = 0; d <= hw; ++d) w[static_cast<std::size_t>(d)] = kernel(d * step / b);

    Eigen::MatrixXcd acc(k, k);
    for (int u = 0; u <= N; ++u) {
      acc.setZero();
      const int lo = std::max(u - hw, -N);
      const int hi = std::min(u + hw, N);
      for (int t = lo; t <= hi; ++t) {
        const double wt = w[static_cast<std::size_t>(std::abs(u - t))];
        if (wt == 0.0) continue;
        if (t >= 0) {
          acc.noalias() += wt * slices[static_cast<std::size_t>(t)];
        } else {
          acc.noalias() += wt * slices[static_cast<std::size_t>(-t)].conjugate();
        }
      }
      out[static_cast<std::size_t>(u)] = inv * acc;
    }
    return out;
  }

  // Periodic variant: distances reduced into (-pi, pi]. Plain full loop; this
  // is a diagnostic mode, not the hot path.
  Eigen::MatrixXcd acc(k, k);
  for (int u = 0; u <= N; ++u) {
    acc.setZero();
    for (int t = -N; t <= N; ++t) {
      double delta = (u - t) * step;
      while (delta > M_PI) delta -= 2.0 * M_PI;
      while (delta <= -M_PI) delta += 2.0 * M_PI;
      const double wt = kernel(delta / b);
      if (wt == 0.0) continue;
      if (t >= 0) {
        acc.noalias() += wt * slices[static_cast<std::size_t>(t)];
      } else {
        acc.noalias() += wt * slices[static_cast<std::size_t>(-t)].conjugate();
      }
    }
    out[static_cast<std::size_t>(u)] = inv * acc;
  }
  return out;
}

SpectralEstimate smooth(const DftFrame& frame, double b, const WeightKernel& kernel,
                        FrequencyWrap wrap) {
  auto smoothed = smooth_slices(periodogram_slices(frame), frame.length(), b, kernel, wrap);
  return SpectralEstimate(frame.grid(), frame.length(), b, kernel, std::move(smoothed));
}

SpectralEstimate pooled(const SpectralEstimate& fx, const SpectralEstimate& fy) {
  if (fx.length() != fy.length() || fx.grid() != fy.grid() ||
      fx.bandwidth() != fy.bandwidth() || !(fx.kernel() == fy.kernel())) {
    throw ScopeError("pooled: estimates disagree on T, grid, bandwidth, or kernel");
  }
  std::vector<Eigen::MatrixXcd> avg(fx.slices().size());
  for (std::size_t t = 0; t < avg.size(); ++t) {
    avg[t] = 0.5 * (fx.slices()[t] + fy.slices()[t]);
  }
  return SpectralEstimate(fx.grid(), fx.length(), fx.bandwidth(), fx.kernel(),
                          std::move(avg));
}

std::complex<double> hs_inner(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw ContractViolation("hs_inner: shape mismatch");
  }
  const double cells = static_cast<double>(a.rows()) * static_cast<double>(a.cols());
  return a.cwiseProduct(b.conjugate()).sum() / cells;
}

std::vector<double> integrated_scalar_periodogram(const FunctionalSample& sample) {
  const int T = sample.length();
  const int N = (T - 1) / 2;
  const Eigen::VectorXd v = sample.values().rowwise().mean();

  RealDft dft(T);
  std::vector<std::complex<double>> freq(static_cast<std::size_t>(T / 2 + 1));
  dft.transform(v.data(), freq.data());

  // The e^{-i l_t} phase shift drops out of the squared modulus.
  std::vector<double> pg(static_cast<std::size_t>(N) + 1);
  const double scale = 1.0 / (2.0 * M_PI * T);
  for (int t = 0; t <= N; ++t) {
    pg[static_cast<std::size_t>(t)] = std::norm(freq[static_cast<std::size_t>(t)]) * scale;
  }
  return pg;
}

std::vector<double> integrated_scalar_estimate(const FunctionalSample& sample, double b,
                                               const WeightKernel& kernel,
                                               FrequencyWrap wrap) {
  const auto pg = integrated_scalar_periodogram(sample);
  std::vector<Eigen::MatrixXcd> slices(pg.size());
  for (std::size_t t = 0; t < pg.size(); ++t) {
    slices[t] = Eigen::MatrixXcd::Constant(1, 1, pg[t]);
  }
  const auto smoothed = smooth_slices(slices, sample.length(), b, kernel, wrap);
  std::vector<double> out(smoothed.size());
  for (std::size_t t = 0; t < out.size(); ++t) out[t] = smoothed[t](0, 0).real();
  return out;
}

}  // namespace specop
