#include <doctest.h>

#include <algorithm>
#include <functional>

#include <boost/math/special_functions/beta.hpp>

#include "oracles.hpp"
#include "spanmine/error.hpp"
#include "spanmine/stats.hpp"

using namespace spanmine;

TEST_CASE("pearson fixtures") {
  const std::vector<double> x{1, 2, 3};
  CHECK(pearson(x, x) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(pearson(x, std::vector<double>{-1, -2, -3}) == doctest::Approx(-1.0).epsilon(1e-15));
  CHECK(std::fabs(pearson(x, std::vector<double>{1, 2, 4}) - 9.0 / (2.0 * std::sqrt(21.0))) < 1e-12);
}

TEST_CASE("pearson errors") {
  CHECK_THROWS_AS(pearson(std::vector<double>{1, 1, 1}, std::vector<double>{1, 2, 3}), DegenerateInput);
  CHECK_THROWS_AS(pearson(std::vector<double>{1, 2}, std::vector<double>{1, 2}), DegenerateInput);
  CHECK_THROWS_AS(pearson(std::vector<double>{1, 2, 3}, std::vector<double>{1, 2}), DimensionMismatch);
}

TEST_CASE("spearman fixtures") {
  const std::vector<double> x{0.1, 0.5, 0.2, 0.9, 0.3};
  std::vector<double> cubed;
  for (double v : x) cubed.push_back(v * v * v + 2);
  CHECK(spearman(x, cubed) == doctest::Approx(1.0).epsilon(1e-15));
  std::vector<double> rev;
  for (double v : x) rev.push_back(-v);
  CHECK(spearman(x, rev) == doctest::Approx(-1.0).epsilon(1e-15));

  const std::vector<double> tied{1, 2, 2, 3}, y{1, 2, 3, 4};
  CHECK(average_ranks(tied) == std::vector<double>{1, 2.5, 2.5, 4});
  CHECK(spearman(tied, y) == pearson(std::vector<double>{1, 2.5, 2.5, 4}, y));
  CHECK(std::fabs(spearman(tied, y) - 0.94868329805051388) < 1e-12);
}

TEST_CASE("spearman properties on random data") {
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<int> small(0, 5);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = oracle::uniform(rng, 3, 40);
    std::vector<double> x(n), y(n), xt(n);
    for (auto& v : x) v = g(rng);
    for (auto& v : y) v = g(rng);
    // Distinct data: closed form with squared rank differences.
    const auto rx = oracle::count_ranks(x);
    const auto ry = oracle::count_ranks(y);
    double d2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) d2 += (rx[i] - ry[i]) * (rx[i] - ry[i]);
    const double nn = static_cast<double>(n);
    CHECK(std::fabs(spearman(x, y) - (1 - 6 * d2 / (nn * (nn * nn - 1)))) < 1e-12);
    // Positive affine invariance of pearson; bounds.
    for (std::size_t i = 0; i < n; ++i) xt[i] = 4.0 * x[i] - 7.0;
    CHECK(std::fabs(pearson(xt, y) - pearson(x, y)) < 1e-12);
    CHECK(std::fabs(pearson(x, y)) <= 1.0);
    // Tied data: ranks by counting.
    std::vector<double> tx(n), ty(n);
    for (auto& v : tx) v = small(rng);
    for (auto& v : ty) v = small(rng);
    CHECK(average_ranks(tx) == oracle::count_ranks(tx));
    const auto rtx = oracle::count_ranks(tx), rty = oracle::count_ranks(ty);
    if (std::adjacent_find(rtx.begin(), rtx.end(), std::not_equal_to<>()) == rtx.end() ||
        std::adjacent_find(rty.begin(), rty.end(), std::not_equal_to<>()) == rty.end()) {
      CHECK_THROWS_AS(spearman(tx, ty), DegenerateInput);
    } else {
      CHECK(spearman(tx, ty) == pearson(rtx, rty));
    }
  }
}

TEST_CASE("regularized incomplete beta against Boost.Math") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> ab(0.05, 300.0), xs(0.0, 1.0);
  for (int i = 0; i < 300; ++i) {
    const double a = ab(rng), b = i % 3 == 0 ? 0.5 : ab(rng), x = xs(rng);
    const double want = boost::math::ibeta(a, b, x);
    CHECK(std::fabs(regularized_incomplete_beta(a, b, x) - want) < 1e-12);
  }
  CHECK(regularized_incomplete_beta(2, 3, 0) == 0.0);
  CHECK(regularized_incomplete_beta(2, 3, 1) == 1.0);
}

TEST_CASE("williams example verified against a separate implementation") {
  // Reference values from scipy.stats.t for the same formula.
  const auto w = williams_test(0.7, 0.5, 0.6, 100);
  CHECK(std::fabs(w.t - 3.060965822542296) < 1e-9);
  CHECK(std::fabs(w.p - 0.0028539767160140716) < 1e-9);
  CHECK(w.df == 97);
  const auto ref = oracle::williams_reference(0.7, 0.5, 0.6, 100);
  CHECK(std::fabs(w.t - ref.t) < 1e-12);
  CHECK(std::fabs(w.p - ref.p) < 1e-12);

  const auto w2 = williams_test(0.3, 0.45, 0.2, 40);
  CHECK(std::fabs(w2.t - -0.81302948848891232) < 1e-9);
  CHECK(std::fabs(w2.p - 0.42140215575944495) < 1e-9);
  const auto w3 = williams_test(-0.2, 0.1, 0.5, 25);
  CHECK(std::fabs(w3.t - -1.4776209409268568) < 1e-9);
  CHECK(std::fabs(w3.p - 0.15368329310135923) < 1e-9);
}

TEST_CASE("williams: equal correlations, antisymmetry, range") {
  const auto eq = williams_test(0.4, 0.4, 0.3, 50);
  CHECK(eq.t == 0.0);
  CHECK(eq.p == 1.0);
  CHECK(williams_test(0.6, 0.6, 1.0, 50).p == 1.0);

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> r(-0.95, 0.95);
  for (int i = 0; i < 200; ++i) {
    const double a = r(rng), b = r(rng), c = r(rng);
    const std::size_t n = oracle::uniform(rng, 4, 2000);
    WilliamsResult x, y;
    try {
      x = williams_test(a, b, c, n);
      y = williams_test(b, a, c, n);
    } catch (const DegenerateInput&) {
      continue;  // correlation matrix not positive definite
    }
    CHECK(x.t == doctest::Approx(-y.t).epsilon(1e-12));
    CHECK(x.p == doctest::Approx(y.p).epsilon(1e-12));
    CHECK(x.p >= 0.0);
    CHECK(x.p <= 1.0);
  }
}

TEST_CASE("williams errors") {
  CHECK_THROWS_AS(williams_test(1.0, 0.5, 0.2, 30), DegenerateInput);
  CHECK_THROWS_AS(williams_test(0.5, -1.0, 0.2, 30), DegenerateInput);
  CHECK_THROWS_AS(williams_test(0.5, 0.4, 1.0, 30), DegenerateInput);
  CHECK_THROWS_AS(williams_test(0.5, 0.4, 0.2, 3), DegenerateInput);
}

TEST_CASE("student t p-values") {
  for (double df : {1.0, 3.0, 10.0, 97.0, 1000.0}) {
    const boost::math::students_t dist(df);
    for (double t : {0.0, 0.5, -1.3, 2.0, 7.5}) {
      const double want = 2 * boost::math::cdf(boost::math::complement(dist, std::fabs(t)));
      CHECK(std::fabs(student_t_two_tailed_p(t, df) - want) < 1e-12);
    }
  }
}
