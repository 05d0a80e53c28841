#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "unidisc/norms.hpp"
#include "unidisc/parallel.hpp"
#include "unidisc/pointsets.hpp"

using namespace unidisc;

TEST_SUITE("norms") {
  TEST_CASE("exact norms of simple polynomials") {
    const auto mono = TrigPolynomial::monomial({3, -2});
    CHECK(norm_l2_exact(mono).value == doctest::Approx(1.0));
    CHECK(norm_lq_even_exact(mono, 4).value == doctest::Approx(1.0));
    CHECK(norm_l2_exact(TrigPolynomial::constant(2, 3.0)).value == doctest::Approx(3.0));
    // |1 + e^{ix}|^4 = (2 + 2 cos x)^2 has mean 6.
    const TrigPolynomial f(FrequencyBox({1}), {0.0, 1.0, 1.0});
    CHECK(norm_lq_even_exact(f, 4).value == doctest::Approx(std::pow(6.0, 0.25)).epsilon(1e-14));
    CHECK_THROWS(norm_lq_even_exact(f, 3));
    for (double q : {1.0, 1.5, 3.0, 7.0}) {
      CHECK(norm_lq_quadrature(TrigPolynomial::constant(1, -2.5), q).value == doctest::Approx(2.5).epsilon(1e-14));
    }
  }

  TEST_CASE("Parseval equals the grid mean") {
    std::mt19937_64 rng(1);
    std::uniform_int_distribution<int> deg(0, 8);
    for (int trial = 0; trial < 100; ++trial) {
      std::vector<int> n(static_cast<std::size_t>(1 + trial % 3));
      for (int& v : n) v = deg(rng);
      const FrequencyBox box(n);
      const auto f = random_poly(box, trial, SampleKind::gaussian);
      const auto grid = tensor_grid(box, GridKind::P).points();
      const double l2 = norm_l2_exact(f).value;
      CHECK(discrete_norm(f, grid, 2.0).value == doctest::Approx(l2).epsilon(1e-12));
      CHECK(norm_lq_even_exact(f, 2).value == doctest::Approx(l2).epsilon(1e-12));
    }
  }

  TEST_CASE("quadrature") {
    const auto f = random_poly(FrequencyBox({3, 2}), 8, SampleKind::gaussian);
    const auto q2 = norm_lq_quadrature(f, 2.0);
    CHECK(std::abs(q2.value - norm_l2_exact(f).value) <= q2.error_bound + 1e-12);
    // |1 + 2 cos x| against a dense midpoint rule.
    const auto d1 = dirichlet(1);
    const auto q1 = norm_lq_quadrature(d1, 1.0);
    const double ref = oracle::circle_mean_abs([](double x) { return 1.0 + 2.0 * std::cos(x); }, 12 * 64 * 64);
    CHECK(std::abs(q1.value - ref) <= q1.error_bound + 1e-6);
  }

  TEST_CASE("certified sup norm brackets") {
    const auto k8 = norm_linf_certified(fejer(8));
    CHECK(k8.value <= 8.0 + 1e-12);
    CHECK(k8.upper >= 8.0);
    CHECK(k8.value == doctest::Approx(8.0));
    const auto mono = norm_linf_certified(TrigPolynomial::monomial({2, 1}));
    CHECK(mono.value <= 1.0 + 1e-12);
    CHECK(mono.upper >= 1.0);
    const auto d3 = norm_linf_certified(dirichlet(3));
    CHECK(d3.value <= 7.0 + 1e-12);
    CHECK(d3.upper >= 7.0);
    CHECK(std::abs(fejer(8)(k8.argmax)) == doctest::Approx(k8.value));
    const auto peak = linf_peak(fejer(8));
    CHECK(peak.value == doctest::Approx(8.0));
  }

  TEST_CASE("norm monotonicity in q") {
    for (int trial = 0; trial < 20; ++trial) {
      const auto f = random_poly(FrequencyBox({4, 3}), 100 + trial, SampleKind::gaussian);
      const auto n1 = norm_lq_quadrature(f, 1.0);
      const double n2 = norm_l2_exact(f).value;
      const double n4 = norm_lq_even_exact(f, 4).value;
      const auto ninf = norm_linf_certified(f);
      CHECK(n1.value <= n2 + n1.error_bound + 1e-12);
      CHECK(n2 <= n4 + 1e-12);
      CHECK(n4 <= ninf.upper);
    }
  }

  TEST_CASE("discrete norms") {
    const auto pts = random_points(50, 2, 3);
    const auto c = TrigPolynomial::constant(2, Complex(0.0, -4.0));
    for (double q : {1.0, 2.0, 3.5, kInfinity}) CHECK(discrete_norm(c, pts, q).value == doctest::Approx(4.0));
    const auto f = random_poly(FrequencyBox({2, 2}), 4, SampleKind::gaussian);
    const auto values = evaluate(f, pts);
    CHECK(discrete_norm(f, pts, kInfinity).value <= norm_linf_certified(f).upper);
    CHECK(lq_power(f, 2.0) == doctest::Approx(std::pow(norm_l2_exact(f).value, 2)));
    CHECK(lq_power(f, 4.0) == doctest::Approx(std::pow(norm_lq_even_exact(f, 4).value, 4)));
    CHECK(discrete_norm_of_values(values, 2.0) == doctest::Approx(std::sqrt(mean_abs_power(values, 2.0))));
    CHECK_THROWS(discrete_norm(f, PointSet::empty(2), 2.0));
  }

  TEST_CASE("quarter-spaced grid brackets are stable across N") {
    for (double q : {1.0, 2.0, 4.0, kInfinity}) {
      std::vector<double> lows;
      std::vector<double> highs;
      for (int n : {4, 8, 16}) {
        const FrequencyBox box({n});
        const auto grid = tensor_grid(box, GridKind::Pprime).points();
        double lo = 1e300;
        double hi = 0.0;
        for (int trial = 0; trial < 100; ++trial) {
          const auto f = random_poly(box, mix_seed(5, n, trial), trial % 4 == 3 ? SampleKind::spike : SampleKind::gaussian);
          const auto values = evaluate(f, grid);
          const double ratio = std::isinf(q) ? discrete_norm_of_values(values, q) / norm_linf_certified(f).value
                                             : mean_abs_power(values, q) / lq_power(f, q);
          lo = std::min(lo, ratio);
          hi = std::max(hi, ratio);
        }
        lows.push_back(lo);
        highs.push_back(hi);
      }
      for (std::size_t i = 0; i < lows.size(); ++i) {
        CHECK(lows[i] > 0.3);
        CHECK(highs[i] < 2.0);
        CHECK(highs[i] / lows[i] < 2.5);
      }
    }
  }
}
