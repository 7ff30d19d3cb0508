#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <thread>
#include <vector>

#include "specop/numerics.hpp"
#include "specop/parallel.hpp"
#include "specop/rng.hpp"
#include "specop/stats.hpp"

using namespace specop;

TEST_CASE("pairwise_sum basics") {
  CHECK(pairwise_sum({}) == 0.0);
  const double one[] = {3.25};
  CHECK(pairwise_sum(one) == 3.25);
  const double four[] = {1.0, 2.0, 3.0, 4.0};
  CHECK(pairwise_sum(four) == 10.0);
}

TEST_CASE("pairwise_sum matches a long-double accumulator") {
  GaussianSampler rng(RngStream::root(91).engine());
  std::vector<double> v(10001);
  for (auto& x : v) x = rng() * 1e6;
  long double exact = 0.0L;
  for (double x : v) exact += static_cast<long double>(x);
  const double got = pairwise_sum(v);
  CHECK(std::abs(got - static_cast<double>(exact)) <=
        1e-12 * std::abs(static_cast<double>(exact)) + 1e-6);
}

TEST_CASE("pairwise_sum is order-deterministic") {
  GaussianSampler rng(RngStream::root(5).engine());
  std::vector<double> v(777);
  for (auto& x : v) x = rng();
  CHECK(pairwise_sum(v) == pairwise_sum(v));
}

TEST_CASE("adaptive_simpson closed forms") {
  CHECK(adaptive_simpson([](double x) { return x * x; }, 0.0, 1.0, 1e-12) ==
        doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(adaptive_simpson([](double x) { return std::sin(x); }, 0.0, M_PI, 1e-12) ==
        doctest::Approx(2.0).epsilon(1e-10));
  const double erf1 = adaptive_simpson([](double x) { return std::exp(-x * x); }, 0.0, 1.0, 1e-12);
  CHECK(erf1 == doctest::Approx(std::sqrt(M_PI) / 2.0 * std::erf(1.0)).epsilon(1e-11));
}

TEST_CASE("adaptive_simpson resolves a sharp peak") {
  const double a = 0.01;
  const double got = adaptive_simpson([a](double x) { return 1.0 / (a * a + x * x); },
                                      -1.0, 1.0, 1e-9);
  const double want = 2.0 * std::atan(1.0 / a) / a;
  CHECK(got == doctest::Approx(want).epsilon(1e-8));
}

TEST_CASE("adaptive_simpson survives a mirror-symmetric kinked integrand") {
  // Product of two triangle bumps offset by 2*pi/3, integrated over their
  // support overlap [-pi/3, pi]. The kinks land exactly on the first-level
  // sample points and the halves mirror each other, so the top-level error
  // estimate is exactly zero while the coarse value is off by ~6%. Exact
  // value by piecewise polynomial algebra: 40*pi/27.
  const auto tri = [](double u) { return std::abs(u) <= M_PI ? 2.0 * (1.0 - std::abs(u) / M_PI) : 0.0; };
  const double x = 2.0 * M_PI / 3.0;
  const double got = adaptive_simpson([&](double u) { return tri(u) * tri(u - x); },
                                      x - M_PI, M_PI, 1e-10);
  CHECK(got == doctest::Approx(40.0 * M_PI / 27.0).epsilon(1e-10));
}

TEST_CASE("RngStream children are deterministic and distinct") {
  const RngStream root = RngStream::root(1234);
  CHECK(RngStream::root(1234).key() == root.key());
  CHECK(root.child(0).key() == root.child(0).key());
  CHECK(root.child(0).key() != root.child(1).key());
  CHECK(root.child(0).key() != root.key());
  CHECK(root.child(0).child(0).key() != root.child(0).key());
  CHECK(RngStream::root(1).key() != RngStream::root(2).key());

  auto e1 = root.child(7).engine();
  auto e2 = root.child(7).engine();
  CHECK(e1() == e2());
  CHECK(e1() == e2());
}

TEST_CASE("GaussianSampler is reproducible and affine-correct") {
  GaussianSampler a(RngStream::root(42).engine());
  GaussianSampler b(RngStream::root(42).engine());
  for (int i = 0; i < 100; ++i) CHECK(a() == b());

  GaussianSampler c(RngStream::root(43).engine());
  GaussianSampler d(RngStream::root(43).engine());
  for (int i = 0; i < 10; ++i) CHECK(c.normal(2.0, 3.0) == 2.0 + 3.0 * d());
}

TEST_CASE("GaussianSampler moments") {
  GaussianSampler rng(RngStream::root(2024).engine());
  std::vector<double> v(200000);
  for (auto& x : v) x = rng();
  CHECK(std::abs(mean(v)) <= 0.01);
  CHECK(std::abs(variance(v) - 1.0) <= 0.02);
  CHECK(std::abs(skewness(v)) <= 0.03);
  CHECK(std::abs(excess_kurtosis(v)) <= 0.06);
}

TEST_CASE("descriptive statistics on a hand example") {
  const std::vector<double> v{1.0, 2.0, 3.0, 4.0};
  CHECK(mean(v) == 2.5);
  CHECK(variance(v) == doctest::Approx(1.25).epsilon(1e-15));
  CHECK(skewness(v) == doctest::Approx(0.0).scale(1).epsilon(1e-14));
  CHECK(excess_kurtosis(v) == doctest::Approx(-1.36).epsilon(1e-12));
}

TEST_CASE("normal_cdf values and symmetry") {
  CHECK(normal_cdf(0.0) == 0.5);
  CHECK(normal_cdf(1.959963984540054) == doctest::Approx(0.975).epsilon(1e-9));
  for (double x : {0.3, 1.1, 2.7}) {
    CHECK(normal_cdf(-x) == doctest::Approx(1.0 - normal_cdf(x)).epsilon(1e-14));
  }
}

TEST_CASE("ks_statistic against Uniform(0,1) by hand") {
  const std::vector<double> sample{0.25, 0.75};
  const double d = ks_statistic(sample, [](double x) { return std::clamp(x, 0.0, 1.0); });
  CHECK(d == doctest::Approx(0.25).epsilon(1e-15));
}

TEST_CASE("ks_two_sample by hand") {
  CHECK(ks_two_sample({1.0, 2.0}, {1.5, 2.5}) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(ks_two_sample({1.0, 2.0, 3.0}, {1.0, 2.0, 3.0}) == doctest::Approx(0.0).scale(1));
}

TEST_CASE("parallel_for covers every index once, any worker count") {
  const int n = 1000;
  for (int workers : {1, 2, 5}) {
    std::vector<double> out(n, -1.0);
    parallel_for(n, workers, [&](int i) { out[static_cast<std::size_t>(i)] = i * i; });
    for (int i = 0; i < n; ++i) CHECK(out[static_cast<std::size_t>(i)] == double(i) * i);
  }
}

TEST_CASE("parallel_for propagates the first exception") {
  CHECK_THROWS_AS(
      parallel_for(100, 4,
                   [](int i) {
                     if (i == 37) throw std::runtime_error("boom");
                   }),
      std::runtime_error);
}

TEST_CASE("parallel_for with one worker stays on the calling thread") {
  const auto caller = std::this_thread::get_id();
  bool same = true;
  parallel_for(16, 1, [&](int) { same = same && std::this_thread::get_id() == caller; });
  CHECK(same);
}

TEST_CASE("parallel_for handles zero items") {
  int calls = 0;
  parallel_for(0, 4, [&](int) { ++calls; });
  CHECK(calls == 0);
}
