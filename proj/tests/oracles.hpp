#pragma once

// Brute-force references used by the tests. Deliberately naive: direct sums,
// full candidate scans and floating-point cell counting, sharing no code
// paths with the library beyond its basic containers.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <vector>

#include "unidisc/point_set.hpp"
#include "unidisc/trigpoly.hpp"

namespace oracle {

inline constexpr double kPi = 3.14159265358979323846;

/// sum_k c_k e^{i(k,x)} by an explicit double loop.
inline std::complex<double> direct_sum(const unidisc::TrigPolynomial& f, const std::vector<double>& x) {
  std::complex<double> sum = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const auto k = f.frequency(i);
    double phase = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) phase += k[j] * x[j];
    sum += f.coefficients()[i] * std::complex<double>(std::cos(phase), std::sin(phase));
  }
  return sum;
}

/// All frequencies of a composition union, as a set.
inline std::set<std::vector<int>> cross_by_boxes(int n, int d) {
  std::set<std::vector<int>> out;
  std::vector<int> s(static_cast<std::size_t>(d), 0);
  auto visit_box = [&](const std::vector<int>& deg) {
    std::vector<int> k(deg.size());
    for (std::size_t j = 0; j < deg.size(); ++j) k[j] = -deg[j];
    for (;;) {
      out.insert(k);
      int j = static_cast<int>(deg.size()) - 1;
      while (j >= 0 && k[j] == deg[j]) {
        k[j] = -deg[j];
        --j;
      }
      if (j < 0) break;
      ++k[j];
    }
  };
  // Odometer over all s with entries <= n, keeping those summing to n.
  for (;;) {
    int total = 0;
    for (int v : s) total += v;
    if (total == n) {
      std::vector<int> deg;
      for (int v : s) deg.push_back((1 << v) - 1);
      visit_box(deg);
    }
    int j = d - 1;
    while (j >= 0 && s[j] == n) s[j--] = 0;
    if (j < 0) break;
    ++s[j];
  }
  return out;
}

/// Unit coordinates of a point set as rows.
inline std::vector<std::vector<double>> rows(const unidisc::PointSet& p) {
  const auto u = p.to_unit();
  std::vector<std::vector<double>> out(u.size(), std::vector<double>(static_cast<std::size_t>(u.dim())));
  for (std::size_t i = 0; i < u.size(); ++i)
    for (int j = 0; j < u.dim(); ++j) out[i][j] = u.unit_coordinate(i, j);
  return out;
}

/// Largest empty open box in [0,1)^2 over all candidate faces.
inline double dispersion_2d(const std::vector<std::vector<double>>& pts) {
  std::vector<double> xs{0.0, 1.0};
  std::vector<double> ys{0.0, 1.0};
  for (const auto& p : pts) {
    xs.push_back(p[0]);
    ys.push_back(p[1]);
  }
  double best = 0.0;
  for (double x0 : xs)
    for (double x1 : xs) {
      if (x1 <= x0) continue;
      for (double y0 : ys)
        for (double y1 : ys) {
          if (y1 <= y0) continue;
          const double vol = (x1 - x0) * (y1 - y0);
          if (vol <= best) continue;
          const bool empty = std::none_of(pts.begin(), pts.end(), [&](const auto& p) {
            return p[0] > x0 && p[0] < x1 && p[1] > y0 && p[1] < y1;
          });
          if (empty) best = vol;
        }
    }
  return best;
}

/// Every dyadic box of volume 2^{t-r} holds 2^t points, by direct counting.
inline bool is_net(const std::vector<std::vector<double>>& pts, int t) {
  const int d = static_cast<int>(pts.front().size());
  int r = 0;
  while ((std::size_t{1} << r) < pts.size()) ++r;
  const int level = r - t;
  std::vector<int> shape(static_cast<std::size_t>(d), 0);
  for (;;) {
    int total = 0;
    for (int v : shape) total += v;
    if (total == level) {
      std::map<std::vector<long>, int> counts;
      for (const auto& p : pts) {
        std::vector<long> cell;
        for (int j = 0; j < d; ++j) cell.push_back(static_cast<long>(std::floor(std::ldexp(p[j], shape[j]))));
        ++counts[cell];
      }
      if (counts.size() != (std::size_t{1} << level)) return false;
      for (const auto& [cell, c] : counts)
        if (c != (1 << t)) return false;
    }
    int j = d - 1;
    while (j >= 0 && shape[j] == level) shape[j--] = 0;
    if (j < 0) break;
    ++shape[j];
  }
  return true;
}

inline double torus_gap(double a, double b) {
  const double g = std::fmod(std::abs(a - b), 2.0 * kPi);
  return std::min(g, 2.0 * kPi - g);
}

/// Fejer kernel by its defining coefficient sum.
inline double fejer_sum(int n, double x) {
  double v = 0.0;
  for (int k = -(n - 1); k <= n - 1; ++k) v += (1.0 - std::abs(k) / static_cast<double>(n)) * std::cos(k * x);
  return v;
}

/// Mean of |g| over a fine equispaced grid on the circle.
template <typename G>
double circle_mean_abs(G g, int nodes) {
  double s = 0.0;
  for (int i = 0; i < nodes; ++i) s += std::abs(g(2.0 * kPi * i / nodes));
  return s / nodes;
}

}  // namespace oracle
