#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <limits>

#include "corpusdiff/error.hpp"
#include "corpusdiff/rng.hpp"
#include "corpusdiff/stats.hpp"

#include "helpers.hpp"

using namespace corpusdiff;

TEST_CASE("welch: identical samples give t=0, p=1") {
  const std::vector<double> a = {1.0, 2.0, 3.0};
  const auto r = welch_t_test(a, a);
  CHECK(r.t == doctest::Approx(0.0));
  CHECK(r.p_two_sided == doctest::Approx(1.0));
  CHECK(r.mean_a == doctest::Approx(2.0));
}

TEST_CASE("welch: frozen high-precision reference case") {
  // expected values computed beforehand by numerical integration of the
  // t density at 40-digit precision
  const std::vector<double> a = {14.1, 13.8, 14.5, 14.0};
  const std::vector<double> b = {13.2, 13.5, 13.0};
  const auto r = welch_t_test(a, b);
  CHECK(std::fabs(r.t - 4.190279412931978) < 1e-9);
  CHECK(std::fabs(r.df - 4.824247355573637) < 1e-9);
  CHECK(std::fabs(r.p_two_sided - 0.009260013592288837) < 1e-9);
}

TEST_CASE("welch: matches the quadrature oracle on random samples") {
  Rng rng(2024);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<double> a, b;
    const std::size_t na = 2 + rng.below(20), nb = 2 + rng.below(20);
    for (std::size_t i = 0; i < na; ++i) a.push_back(rng.uniform01());
    for (std::size_t i = 0; i < nb; ++i) b.push_back(rng.uniform01() * 3.0 - 1.0);
    const auto got = welch_t_test(a, b);
    const auto want = testutil::welch_oracle(a, b);
    CHECK(std::fabs(got.t - want.t) < 1e-9);
    CHECK(std::fabs(got.p_two_sided - want.p) < 1e-9);
  }
}

TEST_CASE("welch: undersized samples rejected") {
  const std::vector<double> one = {1.0};
  const std::vector<double> two = {1.0, 2.0};
  CHECK_THROWS_AS(welch_t_test(one, two), Error);
  CHECK_THROWS_AS(welch_t_test(two, one), Error);
}

TEST_CASE("welch: zero-variance conventions") {
  const std::vector<double> flat1 = {2.0, 2.0, 2.0};
  const std::vector<double> flat2 = {5.0, 5.0};
  SUBCASE("equal means") {
    const auto r = welch_t_test(flat1, flat1);
    CHECK(r.t == 0.0);
    CHECK(r.p_two_sided == 1.0);
  }
  SUBCASE("unequal means") {
    const auto r = welch_t_test(flat1, flat2);
    CHECK(std::isinf(r.t));
    CHECK(r.t < 0.0);
    CHECK(r.p_two_sided == 0.0);
  }
}

TEST_CASE("welch: swapping samples negates t, keeps p") {
  Rng rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> a, b;
    for (int i = 0; i < 8; ++i) a.push_back(rng.normal());
    for (int i = 0; i < 5; ++i) b.push_back(rng.normal() + 0.3);
    const auto ab = welch_t_test(a, b);
    const auto ba = welch_t_test(b, a);
    CHECK(std::fabs(ab.t + ba.t) < 1e-12);
    CHECK(std::fabs(ab.p_two_sided - ba.p_two_sided) < 1e-12);
    CHECK(std::fabs(ab.df - ba.df) < 1e-12);
  }
}

TEST_CASE("welch: shift and scale invariance") {
  Rng rng(99);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> a, b;
    for (int i = 0; i < 10; ++i) a.push_back(rng.normal() * 2.0);
    for (int i = 0; i < 7; ++i) b.push_back(rng.normal() * 0.5 + 1.0);
    const double shift = rng.uniform01() * 10.0 - 5.0;
    const double scale = 0.1 + rng.uniform01() * 5.0;
    auto shifted_a = a, shifted_b = b, scaled_a = a, scaled_b = b;
    for (double& x : shifted_a) x += shift;
    for (double& x : shifted_b) x += shift;
    for (double& x : scaled_a) x *= scale;
    for (double& x : scaled_b) x *= scale;
    const auto base = welch_t_test(a, b);
    const auto sh = welch_t_test(shifted_a, shifted_b);
    const auto sc = welch_t_test(scaled_a, scaled_b);
    CHECK(std::fabs(base.t - sh.t) < 1e-10);
    CHECK(std::fabs(base.p_two_sided - sh.p_two_sided) < 1e-10);
    CHECK(std::fabs(base.df - sh.df) < 1e-10);
    CHECK(std::fabs(base.t - sc.t) < 1e-10);
    CHECK(std::fabs(base.p_two_sided - sc.p_two_sided) < 1e-10);
    CHECK(std::fabs(base.df - sc.df) < 1e-10);
  }
}

TEST_CASE("t_cdf: symmetry at zero and reflection") {
  for (const double nu : {0.5, 1.0, 2.0, 4.82, 10.0, 100.0}) {
    CHECK(t_cdf(0.0, nu) == doctest::Approx(0.5));
    for (const double x : {0.1, 0.9, 1.7, 3.3, 8.0})
      CHECK(t_cdf(x, nu) + t_cdf(-x, nu) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("t_cdf: frozen reference points") {
  CHECK(std::fabs(t_cdf(2.0, 10.0) - 0.9633059826146298) < 1e-12);
  CHECK(std::fabs(t_cdf(-1.5, 3.7) - 0.1067990846010068) < 1e-12);
}

TEST_CASE("t_cdf: matches quadrature oracle on a grid") {
  for (const double nu : {1.5, 3.0, 7.5, 24.0}) {
    for (double x = -4.0; x <= 4.0; x += 1.0) {
      CHECK(std::fabs(t_cdf(x, nu) - testutil::t_cdf_oracle(x, nu)) < 1e-12);
    }
  }
}

TEST_CASE("t_cdf: monotone in x") {
  for (const double nu : {0.7, 2.0, 15.0}) {
    double prev = 0.0;
    for (double x = -10.0; x <= 10.0; x += 0.25) {
      const double c = t_cdf(x, nu);
      CHECK(c >= prev);
      prev = c;
    }
  }
}

TEST_CASE("t_cdf: non-finite x clamps, bad df throws") {
  CHECK(t_cdf(std::numeric_limits<double>::infinity(), 3.0) == 1.0);
  CHECK(t_cdf(-std::numeric_limits<double>::infinity(), 3.0) == 0.0);
  CHECK_THROWS_AS(t_cdf(0.0, 0.0), Error);
  CHECK_THROWS_AS(t_cdf(0.0, -1.0), Error);
}

TEST_CASE("euclidean distance") {
  const std::vector<double> u = {3.0, 4.0};
  const std::vector<double> v = {0.0, 0.0};
  CHECK(euclidean_distance(u, v) == doctest::Approx(5.0));
  CHECK(euclidean_distance(u, u) == 0.0);

  Rng rng(3);
  std::vector<double> p(10), q(10);
  for (int i = 0; i < 10; ++i) {
    p[i] = rng.normal();
    q[i] = rng.normal();
  }
  double ss = 0.0;
  for (int i = 0; i < 10; ++i) ss += (p[i] - q[i]) * (p[i] - q[i]);
  CHECK(std::fabs(euclidean_distance(p, q) - std::sqrt(ss)) < 1e-12);

  const std::vector<double> w = {1.0};
  CHECK_THROWS_AS(euclidean_distance(u, w), Error);
}

TEST_CASE("mean_vector") {
  SUBCASE("single row is identity") {
    const std::vector<std::vector<double>> rows = {{0.2, 0.8}};
    CHECK(mean_vector(rows) == rows[0]);
  }
  SUBCASE("two unit vectors") {
    const std::vector<std::vector<double>> rows = {{1.0, 0.0}, {0.0, 1.0}};
    const auto m = mean_vector(rows);
    CHECK(m[0] == doctest::Approx(0.5));
    CHECK(m[1] == doctest::Approx(0.5));
  }
  SUBCASE("means of simplex rows stay on the simplex") {
    Rng rng(11);
    std::vector<std::vector<double>> rows;
    for (int r = 0; r < 100; ++r) {
      std::vector<double> row(6);
      double total = 0.0;
      for (double& x : row) {
        x = -std::log(1.0 - rng.uniform01());
        total += x;
      }
      for (double& x : row) x /= total;
      rows.push_back(std::move(row));
    }
    const auto m = mean_vector(rows);
    double sum = 0.0;
    for (double x : m) sum += x;
    CHECK(std::fabs(sum - 1.0) < 1e-12);
  }
  SUBCASE("empty input throws") {
    CHECK_THROWS_AS(mean_vector({}), Error);
  }
}
