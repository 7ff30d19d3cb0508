#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <cstring>
#include <string>

#include "specop/errors.hpp"
#include "specop/fdata.hpp"
#include "test_util.hpp"

using namespace specop;
using testutil::TempDir;

TEST_CASE("midpoint grid coordinates") {
  const Grid g = Grid::midpoints(4);
  REQUIRE(g.size() == 4);
  CHECK(g.point(0) == 0.125);
  CHECK(g.point(1) == 0.375);
  CHECK(g.point(2) == 0.625);
  CHECK(g.point(3) == 0.875);
  CHECK_THROWS_AS(Grid::midpoints(0), ContractViolation);
}

TEST_CASE("endpoint grid coordinates") {
  const Grid g = Grid::endpoints(5);
  REQUIRE(g.size() == 5);
  CHECK(g.point(0) == 0.0);
  CHECK(g.point(2) == 0.5);
  CHECK(g.point(4) == 1.0);
  CHECK_THROWS_AS(Grid::endpoints(1), ContractViolation);
}

TEST_CASE("custom grid validation") {
  CHECK_NOTHROW(Grid({0.0, 0.3, 1.0}));
  CHECK_THROWS_AS(Grid({0.3, 0.3}), ContractViolation);
  CHECK_THROWS_AS(Grid({0.5, 0.2}), ContractViolation);
  CHECK_THROWS_AS(Grid({-0.1, 0.5}), ContractViolation);
  CHECK_THROWS_AS(Grid({0.1, 1.5}), ContractViolation);
  CHECK_THROWS_AS(Grid({}), ContractViolation);
}

TEST_CASE("load_csv reads a minimal file onto the midpoint grid") {
  TempDir tmp;
  const auto path = tmp.file("tiny.csv");
  testutil::write_file(path, "1\n0\n-1\n0\n");
  const FunctionalSample s = load_csv(path);
  CHECK(s.length() == 4);
  CHECK(s.grid_size() == 1);
  CHECK(s.grid().point(0) == 0.5);
  CHECK(s.values()(0, 0) == 1.0);
  CHECK(s.values()(2, 0) == -1.0);
  CHECK_FALSE(s.centered());
}

TEST_CASE("load_csv honours a grid header") {
  TempDir tmp;
  const auto path = tmp.file("g.csv");
  testutil::write_file(path, "# grid: 0,0.5,1\n1,2,3\n4,5,6\n7,8,9\n1,1,1\n");
  const FunctionalSample s = load_csv(path);
  CHECK(s.grid() == Grid({0.0, 0.5, 1.0}));
  CHECK(s.values()(1, 2) == 6.0);

  testutil::write_file(path, "# grid: 0,0.5\n1,2,3\n4,5,6\n7,8,9\n1,1,1\n");
  CHECK_THROWS_AS(load_csv(path), ParseError);
}

TEST_CASE("load_csv error reporting carries file coordinates") {
  TempDir tmp;
  const auto ragged = tmp.file("ragged.csv");
  testutil::write_file(ragged, "1,2,3,4,5\n1,2,3,4,5,6\n1,2,3,4,5\n1,2,3,4,5\n");
  CHECK_THROWS_WITH_AS(load_csv(ragged), doctest::Contains("line 2"), ParseError);

  const auto bad = tmp.file("bad.csv");
  testutil::write_file(bad, "1,2\n1,oops\n3,4\n5,6\n");
  try {
    load_csv(bad);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("line 2") != std::string::npos);
    CHECK(msg.find("column 2") != std::string::npos);
  }

  const auto shorty = tmp.file("short.csv");
  testutil::write_file(shorty, "1,2\n3,4\n5,6\n");
  CHECK_THROWS_AS(load_csv(shorty), ScopeError);

  CHECK_THROWS_AS(load_csv(tmp.file("absent.csv")), ParseError);
}

TEST_CASE("save_csv then load_csv round-trips bit-exactly") {
  TempDir tmp;
  const FunctionalSample s = testutil::gaussian_sample(7, 5, 99);
  const auto path = tmp.file("rt.csv");
  save_csv(s, path);
  const FunctionalSample back = load_csv(path);
  REQUIRE(back.length() == 7);
  REQUIRE(back.grid_size() == 5);
  CHECK(back.grid() == s.grid());
  CHECK(std::memcmp(back.values().data(), s.values().data(), sizeof(double) * 35) == 0);
}

TEST_CASE("center removes column means") {
  Eigen::MatrixXd values(2, 2);
  values << 1, 2, 3, 4;
  const FunctionalSample s(Grid::midpoints(2), values);
  const FunctionalSample c = center(s);
  CHECK(c.centered());
  CHECK(c.values()(0, 0) == -1.0);
  CHECK(c.values()(0, 1) == -1.0);
  CHECK(c.values()(1, 0) == 1.0);
  CHECK(c.values()(1, 1) == 1.0);

  Eigen::MatrixXd constant = Eigen::MatrixXd::Constant(5, 3, 4.5);
  const FunctionalSample z = center(FunctionalSample(Grid::midpoints(3), constant));
  CHECK(z.values().cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("center is idempotent") {
  const FunctionalSample s = testutil::gaussian_sample(30, 4, 17);
  const FunctionalSample once = center(s);
  const FunctionalSample twice = center(once);
  CHECK((twice.values() - once.values()).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("fourier_smooth keeps basis elements fixed") {
  const int k = 21;
  const Grid g = Grid::midpoints(k);
  Eigen::MatrixXd values(4, k);
  for (int j = 0; j < k; ++j) {
    const double v = std::sqrt(2.0) * std::cos(2.0 * M_PI * g.point(j));
    for (int t = 0; t < 4; ++t) values(t, j) = v;
  }
  const FunctionalSample s(g, values);
  const FunctionalSample sm = fourier_smooth(s, 21);
  CHECK((sm.values() - values).cwiseAbs().maxCoeff() <= 1e-8);

  Eigen::MatrixXd ones = Eigen::MatrixXd::Ones(4, k);
  const FunctionalSample c(g, ones);
  CHECK((fourier_smooth(c, 1).values() - ones).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("fourier_smooth with n_basis = k reproduces the sample") {
  const FunctionalSample s = testutil::gaussian_sample(6, 5, 3);
  const FunctionalSample sm = fourier_smooth(s, 5);
  CHECK((sm.values() - s.values()).cwiseAbs().maxCoeff() <= 1e-9);
}

TEST_CASE("fourier_smooth equals the explicit least-squares fit") {
  const int k = 15;
  const Grid g = Grid::midpoints(k);
  const FunctionalSample s = testutil::gaussian_sample(5, k, 21);

  Eigen::MatrixXd phi(k, 3);
  for (int j = 0; j < k; ++j) {
    phi(j, 0) = 1.0;
    phi(j, 1) = std::sqrt(2.0) * std::cos(2.0 * M_PI * g.point(j));
    phi(j, 2) = std::sqrt(2.0) * std::sin(2.0 * M_PI * g.point(j));
  }
  const Eigen::MatrixXd gram = phi.transpose() * phi / k;
  const Eigen::MatrixXd want =
      (gram.ldlt().solve(phi.transpose() * s.values().transpose() / k)).transpose() *
      phi.transpose();

  const FunctionalSample sm = fourier_smooth(s, 3);
  CHECK(testutil::max_rel_err(sm.values(), want) <= 1e-10);
}

TEST_CASE("fourier_smooth is linear and idempotent") {
  const FunctionalSample x = testutil::gaussian_sample(8, 11, 31);
  const FunctionalSample y = testutil::gaussian_sample(8, 11, 32);
  const FunctionalSample combo(x.grid(), 2.0 * x.values() - 0.5 * y.values());

  const Eigen::MatrixXd lhs = fourier_smooth(combo, 5).values();
  const Eigen::MatrixXd rhs =
      2.0 * fourier_smooth(x, 5).values() - 0.5 * fourier_smooth(y, 5).values();
  CHECK(testutil::max_rel_err(lhs, rhs) <= 1e-10);

  const FunctionalSample once = fourier_smooth(x, 5);
  const FunctionalSample twice = fourier_smooth(once, 5);
  CHECK((twice.values() - once.values()).cwiseAbs().maxCoeff() <= 1e-8);
}

TEST_CASE("fourier_smooth stays idempotent on an endpoint grid") {
  const FunctionalSample s = testutil::gaussian_sample(6, 9, 77, GridPolicy::endpoint);
  const FunctionalSample once = fourier_smooth(s, 7);
  const FunctionalSample twice = fourier_smooth(once, 7);
  CHECK((twice.values() - once.values()).cwiseAbs().maxCoeff() <= 1e-8);
}

TEST_CASE("fourier_smooth validates the basis size") {
  const FunctionalSample s = testutil::gaussian_sample(5, 7, 1);
  CHECK_THROWS_AS(fourier_smooth(s, 4), ContractViolation);
  CHECK_THROWS_AS(fourier_smooth(s, 9), ContractViolation);
  CHECK_THROWS_AS(fourier_smooth(s, 0), ContractViolation);
  CHECK_THROWS_AS(fourier_smooth(s, -3), ContractViolation);
}

TEST_CASE("project_fourier recovers pure basis coefficients") {
  const int k = 21;
  const Grid g = Grid::midpoints(k);
  Eigen::MatrixXd values(4, k);
  for (int j = 0; j < k; ++j) {
    values(0, j) = 1.0;
    values(1, j) = std::sqrt(2.0) * std::cos(2.0 * M_PI * g.point(j));
    values(2, j) = std::sqrt(2.0) * std::sin(2.0 * M_PI * g.point(j));
    values(3, j) = 2.0 - std::sqrt(2.0) * std::cos(2.0 * M_PI * g.point(j));
  }
  const BasisProjection p = project_fourier(FunctionalSample(g, values), 3);
  REQUIRE(p.n_basis == 3);
  REQUIRE(p.coefficients.rows() == 4);
  CHECK(p.coefficients(0, 0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(p.coefficients(0, 1) == doctest::Approx(0.0).scale(1).epsilon(1e-12));
  CHECK(p.coefficients(1, 1) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(p.coefficients(2, 2) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(p.coefficients(3, 0) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(p.coefficients(3, 1) == doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("fourier_smooth projects white noise onto the low-frequency span") {
  const int k = 17;
  const Grid g = Grid::midpoints(k);
  const FunctionalSample s = testutil::gaussian_sample(4, k, 55);
  const FunctionalSample sm = fourier_smooth(s, 3);

  Eigen::MatrixXd phi(k, 3);
  for (int j = 0; j < k; ++j) {
    phi(j, 0) = 1.0;
    phi(j, 1) = std::sqrt(2.0) * std::cos(2.0 * M_PI * g.point(j));
    phi(j, 2) = std::sqrt(2.0) * std::sin(2.0 * M_PI * g.point(j));
  }
  // Residual of the smoothed curves against the span itself.
  const Eigen::MatrixXd coeff = phi.colPivHouseholderQr().solve(sm.values().transpose());
  CHECK((phi * coeff - sm.values().transpose()).cwiseAbs().maxCoeff() <= 1e-8);
}
