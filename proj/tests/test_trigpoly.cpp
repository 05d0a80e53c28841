#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "unidisc/norms.hpp"
#include "unidisc/parallel.hpp"
#include "unidisc/trigpoly.hpp"

using namespace unidisc;

namespace {

std::vector<double> random_point(std::mt19937_64& rng, int d) {
  std::uniform_real_distribution<double> u(0.0, kTwoPi);
  std::vector<double> x(static_cast<std::size_t>(d));
  for (double& v : x) v = u(rng);
  return x;
}

}  // namespace

TEST_SUITE("trigpoly") {
  TEST_CASE("basic values") {
    const Frequency k{2, -1};
    const std::vector<double> origin{0.0, 0.0};
    CHECK(std::abs(TrigPolynomial::monomial(k)(origin) - Complex(1.0)) < 1e-15);
    CHECK(dirichlet(3)(std::vector<double>{0.0}).real() == doctest::Approx(7.0));
    CHECK(fejer(4)(std::vector<double>{0.0}).real() == doctest::Approx(4.0));
    CHECK(vallee_poussin(5)(std::vector<double>{0.0}).real() == doctest::Approx(15.0));
    CHECK_THROWS(fejer(0));
  }

  TEST_CASE("evaluation matches the direct sum") {
    std::mt19937_64 rng(7);
    for (const auto& deg : {std::vector<int>{2, 3}, std::vector<int>{0, 4}, std::vector<int>{1, 1, 2}}) {
      const FrequencyBox box(deg);
      const auto f = random_poly(box, 11, SampleKind::gaussian);
      std::vector<double> flat;
      std::vector<std::vector<double>> xs;
      for (int i = 0; i < 50; ++i) {
        xs.push_back(random_point(rng, box.dim()));
        flat.insert(flat.end(), xs.back().begin(), xs.back().end());
      }
      const auto values = evaluate_flat(f, flat);
      for (std::size_t i = 0; i < xs.size(); ++i) {
        const auto ref = oracle::direct_sum(f, xs[i]);
        CHECK(std::abs(f(xs[i]) - ref) <= 1e-12 * std::max(1.0, std::abs(ref)));
        CHECK(std::abs(values[i] - ref) <= 1e-12 * std::max(1.0, std::abs(ref)));
      }
    }
  }

  TEST_CASE("sparse polynomials evaluate like their dense form") {
    const auto cross = hyperbolic_cross(3, 2);
    std::vector<Complex> coeffs;
    for (std::size_t i = 0; i < cross.size(); ++i) coeffs.emplace_back(std::cos(i), std::sin(3.0 * i));
    const TrigPolynomial f(2, cross.frequencies, coeffs);
    CHECK_FALSE(f.is_dense());
    const auto dense = f.to_dense();
    std::mt19937_64 rng(3);
    for (int i = 0; i < 20; ++i) {
      const auto x = random_point(rng, 2);
      CHECK(std::abs(f(x) - dense(x)) < 1e-12);
      CHECK(std::abs(f(x) - oracle::direct_sum(f, x)) < 1e-12);
    }
    CHECK_THROWS(TrigPolynomial(1, {{1}, {1}}, {1.0, 2.0}));
  }

  TEST_CASE("tensor grid evaluation") {
    const FrequencyBox box({3, 2});
    const auto f = random_poly(box, 5, SampleKind::gaussian);
    const std::vector<int> counts{5, 7};
    const auto nodes = equispaced_nodes(counts);
    const auto grid = evaluate_tensor_grid(f, nodes);
    for (int a = 0; a < 5; ++a)
      for (int b = 0; b < 7; ++b) {
        const std::vector<double> x{nodes[0][a], nodes[1][b]};
        CHECK(std::abs(grid[a * 7 + b] - oracle::direct_sum(f, x)) < 1e-11);
      }
  }

  TEST_CASE("kernel coefficients and closed forms") {
    for (int n = 1; n <= 12; ++n) {
      const auto v = vallee_poussin(n);
      for (int k = -n; k <= n; ++k) CHECK(std::abs(v.coefficient(Frequency{k}) - Complex(1.0)) < 1e-15);
      CHECK(std::abs(fejer(n).coefficient(Frequency{0}) - Complex(1.0)) < 1e-15);
      for (double x : {0.0, 0.3, 1.7, kTwoPi - 0.01, 1e-9}) {
        CHECK(fejer_value(n, x) == doctest::Approx(oracle::fejer_sum(n, x)).epsilon(1e-10));
        CHECK(vallee_poussin_value(n, x) ==
              doctest::Approx(vallee_poussin(n)(std::vector<double>{x}).real()).epsilon(1e-10));
        CHECK(dirichlet_value(n, x) == doctest::Approx(dirichlet(n)(std::vector<double>{x}).real()).epsilon(1e-10));
      }
    }
  }

  TEST_CASE("fejer kernel is nonnegative with mean one") {
    for (int n : {1, 2, 5, 16, 64}) {
      double mean = 0.0;
      for (int i = 0; i < 4096; ++i) {
        const double v = fejer_value(n, kTwoPi * i / 4096.0);
        CHECK(v >= -1e-12);
        mean += v / 4096.0;
      }
      CHECK(mean == doctest::Approx(1.0).epsilon(1e-12));
    }
  }

  TEST_CASE("translation") {
    const auto f = random_poly(FrequencyBox({2}), 1, SampleKind::gaussian);
    const auto same = translate(f, std::vector<double>{0.0});
    CHECK(same.coefficients() == f.coefficients());
    const auto d1 = translate(dirichlet(1), std::vector<double>{oracle::kPi});
    CHECK(d1(std::vector<double>{0.0}).real() == doctest::Approx(-1.0));
    const std::vector<double> w{1.234};
    CHECK(translate(fejer(8), w)(w).real() == doctest::Approx(8.0));
  }

  TEST_CASE("random polynomials") {
    const FrequencyBox box({1, 1});
    const auto a = random_poly(box, 99, SampleKind::gaussian);
    const auto b = random_poly(box, 99, SampleKind::gaussian);
    CHECK(a.coefficients() == b.coefficients());
    double mean = 0.0;
    const int draws = 10000;
    for (int i = 0; i < draws; ++i) {
      const auto l2 = norm_l2_exact(random_poly(box, 1000 + i, SampleKind::gaussian)).value;
      mean += l2 * l2 / draws;
    }
    CHECK(std::abs(mean - 9.0) < 0.05 * 9.0);
  }

  TEST_CASE("spike peak sits at its center") {
    const FrequencyBox box({6, 3});
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      const auto f = random_poly(box, seed, SampleKind::spike);
      // A spike is D_N(x - w): its peak value is theta(N).
      const auto peak = linf_peak(f);
      CHECK(peak.value == doctest::Approx(static_cast<double>(box.cardinality())).epsilon(1e-9));
      // Locate w on a fine grid and compare to the located peak.
      const int fine = 256;
      double best = 0.0;
      std::vector<double> at(2);
      for (int a = 0; a < fine; ++a)
        for (int b = 0; b < fine; ++b) {
          const std::vector<double> x{kTwoPi * a / fine, kTwoPi * b / fine};
          const double v = std::abs(f(x));
          if (v > best) {
            best = v;
            at = x;
          }
        }
      for (int j = 0; j < 2; ++j) CHECK(oracle::torus_gap(at[j], peak.location[j]) <= 2.0 * kTwoPi / fine);
    }
  }

  TEST_CASE("Lipschitz bound through the certified sup norm") {
    std::mt19937_64 rng(17);
    std::uniform_int_distribution<int> deg(0, 8);
    for (int trial = 0; trial < 200; ++trial) {
      const int d = 1 + trial % 3;
      std::vector<int> n(static_cast<std::size_t>(d));
      for (int& v : n) v = d == 3 ? std::min(deg(rng), 4) : deg(rng);
      const FrequencyBox box(n);
      const auto f = random_poly(box, mix_seed(23, trial), SampleKind::gaussian);
      // A loose bracket keeps the three-dimensional grids small; only the
      // upper end is used.
      const double sup = norm_linf_certified(f, d == 3 ? 0.5 : 0.1, false).upper;
      const auto x = random_point(rng, d);
      const auto y = random_point(rng, d);
      double weight = 0.0;
      for (int j = 0; j < d; ++j) weight += n[j] * torus_distance(x[j], y[j]);
      CHECK(std::abs(f(x) - f(y)) <= weight * sup * (1.0 + 1e-9));
    }
  }

  TEST_CASE("json round trip") {
    const auto f = random_poly(FrequencyBox({2, 1}), 4, SampleKind::gaussian);
    const auto g = trig_polynomial_from_json(to_json(f));
    CHECK(g.is_dense());
    CHECK(g.bounding_box() == f.bounding_box());
    CHECK(g.coefficients() == f.coefficients());
  }
}
