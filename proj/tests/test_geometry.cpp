#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "unidisc/geometry.hpp"
#include "unidisc/norms.hpp"
#include "unidisc/pointsets.hpp"

using namespace unidisc;

namespace {

bool witness_is_empty(const PointSet& pts, const Box& box) {
  for (const auto& row : oracle::rows(pts)) {
    if (box.interior_contains(row)) return false;
  }
  return true;
}

}  // namespace

TEST_SUITE("geometry") {
  TEST_CASE("trivial dispersions") {
    const auto one = PointSet::floating(2, {0.5, 0.5}, Domain::unit_cube);
    const auto r = dispersion_exact(one);
    CHECK(r.volume == 0.5);
    REQUIRE(r.witness.has_value());
    CHECK(r.witness->lower == std::vector<double>{0.0, 0.0});
    CHECK(r.witness->upper == std::vector<double>{1.0, 0.5});
    for (int d = 1; d <= 3; ++d) {
      CHECK(dispersion_exact(PointSet::empty(d)).volume == 1.0);
      CHECK(dispersion_dyadic(PointSet::empty(d)).volume == 1.0);
    }
  }

  TEST_CASE("exact dispersion matches the candidate scan") {
    for (int r = 2; r <= 4; ++r) {
      const auto pts = net_points(default_generator_matrices(2, r));
      CHECK(dispersion_exact(pts).volume == doctest::Approx(oracle::dispersion_2d(oracle::rows(pts))).epsilon(1e-15));
    }
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      const auto pts = random_points(5 + seed % 9, 2, seed);
      const auto r = dispersion_exact(pts);
      CHECK(r.volume == doctest::Approx(oracle::dispersion_2d(oracle::rows(pts))).epsilon(1e-12));
      REQUIRE(r.witness.has_value());
      CHECK(witness_is_empty(pts, *r.witness));
      CHECK(r.witness->volume() == doctest::Approx(r.volume));
    }
  }

  TEST_CASE("exact dispersion in one and three dimensions") {
    const auto line = PointSet::floating(1, {0.1, 0.7, 0.4}, Domain::unit_cube);
    CHECK(dispersion_exact(line).volume == doctest::Approx(0.3));
    // Three dimensions: every empty box visited is empty, and the reported
    // maximum is the largest of them.
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      const auto pts = random_points(12, 3, seed);
      double best = 0.0;
      for_each_empty_box(pts, [&](const Box& b) {
        CHECK(witness_is_empty(pts, b));
        best = std::max(best, b.volume());
      });
      const auto r = dispersion_exact(pts);
      CHECK(r.volume == doctest::Approx(best));
      CHECK(witness_is_empty(pts, *r.witness));
    }
  }

  TEST_CASE("dyadic dispersion") {
    const auto pts = net_points(default_generator_matrices(2, 6));
    const auto dy = dispersion_dyadic(pts);
    CHECK(dy.volume <= std::ldexp(1.0, -5));
    CHECK(dy.volume <= dispersion_exact(pts).volume);
    const auto line = net_points(default_generator_matrices(1, 5));
    CHECK(dispersion_dyadic(line).volume == 0.0);
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      const auto r = random_points(40, 2, seed);
      const auto d = dispersion_dyadic(r);
      CHECK(d.volume <= dispersion_exact(r).volume);
      if (d.witness) CHECK(witness_is_empty(r, *d.witness));
    }
    for (int r = 2; r <= 8; ++r) {
      const auto net = net_points(default_generator_matrices(2, r));
      CHECK(dispersion_dyadic(net).volume < std::ldexp(1.0, 2 - r));
    }
  }

  TEST_CASE("exact scan size guard") {
    const auto big = random_points(600, 2, 3);
    CHECK_THROWS_AS(dispersion_exact(big), std::length_error);
    CHECK(dispersion_exact(big, true).volume > 0.0);
  }

  TEST_CASE("locator finds the same points as a scan") {
    const auto pts = random_points(500, 2, 9).scale_to_torus();
    const PointLocator locator(pts);
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(0.0, kTwoPi);
    for (int trial = 0; trial < 50; ++trial) {
      const std::vector<double> x{u(rng), u(rng)};
      const std::vector<double> radius{0.3, 0.1 + 0.01 * trial};
      std::vector<std::size_t> found;
      locator.for_each_near(x, radius, [&](std::size_t i) { found.push_back(i); });
      std::sort(found.begin(), found.end());
      std::vector<std::size_t> expected;
      for (std::size_t i = 0; i < pts.size(); ++i) {
        if (oracle::torus_gap(pts.torus_coordinate(i, 0), x[0]) <= radius[0] &&
            oracle::torus_gap(pts.torus_coordinate(i, 1), x[1]) <= radius[1])
          expected.push_back(i);
      }
      CHECK(found == expected);
    }
  }

  TEST_CASE("covering certificate") {
    // The quarter-spaced grid leaves gaps of pi / (4 N) > 1 / (2 N) to the
    // nearest node, so it cannot cover at its own N.
    for (int n = 1; n <= 8; n *= 2) {
      const auto g = tensor_grid(FrequencyBox({n, n}), GridKind::Pprime).points();
      CHECK(covering_certificate(g, FrequencyBox({n, n})).status == CoveringStatus::fail);
    }
    const auto single = PointSet::floating(1, {0.0}, Domain::torus);
    const auto r = covering_certificate(single, FrequencyBox({4}));
    CHECK(r.status == CoveringStatus::fail);
    REQUIRE(r.witness.has_value());
    CHECK(oracle::torus_gap((*r.witness)[0], oracle::kPi) < 0.1);

    // A fine dyadic grid covers a coarse box.
    const auto fine = tensor_grid(FrequencyBox({64, 64}), GridKind::Pprime).points();
    CHECK(covering_certificate(fine, FrequencyBox({2, 3})).status == CoveringStatus::pass);
    CHECK(covering_radius(FrequencyBox({0, 2}))[0] == kInfinity);
    CHECK(covering_radius(FrequencyBox({0, 2}))[1] == doctest::Approx(1.0 / 8.0));

    UniversalConstructionParams p;
    p.n = 4;
    p.d = 2;
    const auto u = universal_net(p);
    for (const auto& s : enumerate_compositions(4, 2)) {
      const auto listed = covering_certificate(u.net.points().scale_to_torus(), dyadic_box(s));
      CHECK(listed.status == CoveringStatus::pass);
    }
  }

  TEST_CASE("density profiles") {
    const FrequencyBox box({3, 2});
    const auto own = density_profile(tensor_grid(box, GridKind::Pprime).points(), box);
    CHECK(own.uniform());
    CHECK(own.max_count == 1);
    const auto r = density_profile(random_points(64, 2, 1), FrequencyBox({2, 2}));
    std::uint64_t total = 0;
    for (auto c : r.counts) total += c;
    CHECK(total == 64);
    CHECK(r.total == 64);

    // An L_q net at margin a puts 2^t points in every cell of N = 2^{s + a - 2}.
    UniversalConstructionParams p;
    p.mode = UniversalMode::lq;
    p.n = 4;
    p.d = 2;
    p.a_dq = 3;
    const auto u = universal_net(p);
    for (const auto& s : enumerate_compositions(4, 2)) {
      const auto prof = density_profile(u.net.points(), FrequencyBox({1 << (s.s[0] + 1), 1 << (s.s[1] + 1)}));
      CHECK(prof.uniform());
      CHECK(prof.max_count == (std::uint64_t{1} << u.t));
    }
  }
}
