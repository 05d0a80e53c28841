#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "unidisc/geometry.hpp"

namespace unidisc {

namespace {

using Points = std::vector<std::vector<double>>;
using Visit = std::function<void(const Box&)>;

void empty_boxes_1d(const std::vector<double>& xs, const Visit& visit) {
  std::vector<double> cuts = xs;
  cuts.push_back(0.0);
  cuts.push_back(1.0);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) visit(Box{{cuts[k]}, {cuts[k + 1]}});
}

// Open empty rectangles whose left (forward) or right (backward) side rests
// on a point; the opposite side rests on a point or the boundary.
void side_supported_2d(const Points& pts, bool forward, const Visit& visit) {
  std::vector<std::size_t> order(pts.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return forward ? pts[a][0] < pts[b][0] : pts[a][0] > pts[b][0];
  });
  auto emit = [&](double anchor, double other, double bottom, double top) {
    if (forward) {
      visit(Box{{anchor, bottom}, {other, top}});
    } else {
      visit(Box{{other, bottom}, {anchor, top}});
    }
  };
  for (std::size_t a = 0; a < order.size(); ++a) {
    const auto& p = pts[order[a]];
    double bottom = 0.0;
    double top = 1.0;
    bool closed = false;
    for (std::size_t b = a + 1; b < order.size() && !closed; ++b) {
      const auto& q = pts[order[b]];
      if (q[0] == p[0]) continue;
      if (!(q[1] > bottom && q[1] < top)) continue;
      emit(p[0], q[0], bottom, top);
      if (q[1] > p[1]) {
        top = q[1];
      } else if (q[1] < p[1]) {
        bottom = q[1];
      } else {
        closed = true;
      }
    }
    if (!closed) emit(p[0], forward ? 1.0 : 0.0, bottom, top);
  }
}

void empty_boxes_2d(const Points& pts, const Visit& visit) {
  side_supported_2d(pts, true, visit);
  side_supported_2d(pts, false, visit);
  std::vector<double> ys;
  for (const auto& p : pts) ys.push_back(p[1]);
  empty_boxes_1d(ys, [&](const Box& strip) {
    visit(Box{{0.0, strip.lower[0]}, {1.0, strip.upper[0]}});
  });
}

void empty_boxes(const Points& pts, int d, const Visit& visit) {
  if (d == 1) {
    std::vector<double> xs;
    for (const auto& p : pts) xs.push_back(p[0]);
    empty_boxes_1d(xs, visit);
    return;
  }
  if (d == 2) {
    empty_boxes_2d(pts, visit);
    return;
  }
  // Slab over axis 0 between consecutive admissible faces, recurse on the rest.
  std::vector<double> lefts{0.0};
  for (const auto& p : pts) lefts.push_back(p[0]);
  std::sort(lefts.begin(), lefts.end());
  lefts.erase(std::unique(lefts.begin(), lefts.end()), lefts.end());
  std::vector<std::size_t> order(pts.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return pts[a][0] < pts[b][0]; });
  for (double left : lefts) {
    Points inner;
    std::size_t b = 0;
    while (b < order.size() && pts[order[b]][0] <= left) ++b;
    for (;;) {
      const double right = b < order.size() ? pts[order[b]][0] : 1.0;
      if (right > left) {
        empty_boxes(inner, d - 1, [&](const Box& sub) {
          Box box;
          box.lower.push_back(left);
          box.upper.push_back(right);
          box.lower.insert(box.lower.end(), sub.lower.begin(), sub.lower.end());
          box.upper.insert(box.upper.end(), sub.upper.begin(), sub.upper.end());
          visit(box);
        });
      }
      if (b >= order.size()) break;
      const double x = pts[order[b]][0];
      while (b < order.size() && pts[order[b]][0] == x) {
        const auto& p = pts[order[b]];
        inner.emplace_back(p.begin() + 1, p.end());
        ++b;
      }
    }
  }
}

Points unit_rows(const PointSet& points) {
  Points rows(points.size(), std::vector<double>(static_cast<std::size_t>(points.dim())));
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (int j = 0; j < points.dim(); ++j) rows[i][j] = points.unit_coordinate(i, j);
  }
  return rows;
}

bool better(const Box& a, const Box& b) {
  const double va = a.volume();
  const double vb = b.volume();
  if (va != vb) return va > vb;
  if (a.lower != b.lower) return a.lower < b.lower;
  return a.upper > b.upper;
}

std::uint64_t leading_bits(const PointSet& points, std::size_t i, int axis, int level) {
  if (points.is_dyadic()) {
    const std::uint64_t v = points.numerator(i, axis);
    const int e = points.exponent();
    return level <= e ? v >> (e - level) : v << (level - e);
  }
  const auto c = static_cast<std::uint64_t>(std::floor(std::ldexp(points.unit_coordinate(i, axis), level)));
  return std::min(c, (std::uint64_t{1} << level) - 1);
}

}  // namespace

std::size_t exact_dispersion_limit(int d) {
  switch (d) {
    case 1: return std::size_t{1} << 24;
    case 2: return 512;
    case 3: return 128;
    default: return 32;
  }
}

void for_each_empty_box(const PointSet& points, const std::function<void(const Box&)>& visit,
                        bool allow_large) {
  if (points.dim() < 1) throw std::invalid_argument("point set dimension must be positive");
  if (!allow_large && points.size() > exact_dispersion_limit(points.dim())) {
    throw std::length_error("point set too large for exact dispersion; pass allow_large to override");
  }
  empty_boxes(unit_rows(points), points.dim(), visit);
}

DispersionResult dispersion_exact(const PointSet& points, bool allow_large) {
  DispersionResult result;
  result.method = DispersionMethod::exact;
  std::optional<Box> best;
  for_each_empty_box(
      points,
      [&](const Box& box) {
        if (!best || better(box, *best)) best = box;
      },
      allow_large);
  result.witness = best;
  result.volume = best ? best->volume() : 0.0;
  return result;
}

DispersionResult dispersion_dyadic(const PointSet& points) {
  const int d = points.dim();
  DispersionResult result;
  result.method = DispersionMethod::dyadic_lower_bound;
  const std::size_t m = points.size();
  if (m == 0) {
    result.volume = 1.0;
    result.witness = Box{std::vector<double>(static_cast<std::size_t>(d), 0.0),
                         std::vector<double>(static_cast<std::size_t>(d), 1.0)};
    return result;
  }
  int max_level = 0;
  while ((std::size_t{1} << max_level) < m) ++max_level;
  if (max_level > 28) throw std::length_error("point set too large for the dyadic scan");
  for (int level = 0; level <= max_level; ++level) {
    for (const auto& s : enumerate_compositions(level, d)) {
      std::vector<bool> occupied(std::size_t{1} << level, false);
      for (std::size_t i = 0; i < m; ++i) {
        std::uint64_t key = 0;
        for (int j = 0; j < d; ++j) key = (key << s.s[j]) | leading_bits(points, i, j, s.s[j]);
        occupied[key] = true;
      }
      const auto it = std::find(occupied.begin(), occupied.end(), false);
      if (it == occupied.end()) continue;
      std::uint64_t rest = static_cast<std::uint64_t>(it - occupied.begin());
      Box box{std::vector<double>(static_cast<std::size_t>(d)), std::vector<double>(static_cast<std::size_t>(d))};
      for (int j = d - 1; j >= 0; --j) {
        const std::uint64_t cell = rest & ((std::uint64_t{1} << s.s[j]) - 1);
        rest >>= s.s[j];
        box.lower[j] = std::ldexp(static_cast<double>(cell), -s.s[j]);
        box.upper[j] = std::ldexp(static_cast<double>(cell + 1), -s.s[j]);
      }
      result.volume = std::ldexp(1.0, -level);
      result.witness = box;
      result.resolution = level;
      return result;
    }
  }
  result.volume = 0.0;
  result.resolution = max_level;
  return result;
}

}  // namespace unidisc
