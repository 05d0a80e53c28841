#include "unidisc/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "unidisc/trigpoly.hpp"

namespace unidisc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Smallest k with 2 pi 2^-k <= radius.
int cell_level(double radius) {
  if (std::isinf(radius)) return 0;
  int k = 0;
  while (std::ldexp(kTwoPi, -k) > radius) ++k;
  return k;
}

std::uint64_t cell_of(const PointSet& points, std::size_t i, int axis, int level) {
  if (points.is_dyadic()) {
    const std::uint64_t v = points.numerator(i, axis);
    const int e = points.exponent();
    return level <= e ? v >> (e - level) : v << (level - e);
  }
  const double u = points.unit_coordinate(i, axis);
  const auto c = static_cast<std::uint64_t>(std::floor(std::ldexp(u, level)));
  return std::min(c, (std::uint64_t{1} << level) - 1);
}

// Visits every multi-index in the product of per-axis index lists.
void for_each_product(const std::vector<std::vector<std::uint64_t>>& lists,
                      const std::function<void(const std::vector<std::uint64_t>&)>& visit) {
  const std::size_t d = lists.size();
  for (const auto& l : lists) {
    if (l.empty()) return;
  }
  std::vector<std::size_t> pos(d, 0);
  std::vector<std::uint64_t> cur(d);
  for (;;) {
    for (std::size_t j = 0; j < d; ++j) cur[j] = lists[j][pos[j]];
    visit(cur);
    std::size_t j = d;
    while (j > 0) {
      --j;
      if (++pos[j] < lists[j].size()) break;
      pos[j] = 0;
      if (j == 0) return;
    }
    if (d == 0) return;
  }
}

double normalized_gap(const PointLocator& loc, std::span<const double> x,
                      const std::vector<double>& radius) {
  double best = kInf;
  for (std::size_t i = 0; i < loc.size(); ++i) {
    const auto p = loc.coordinates(i);
    double worst = 0.0;
    for (int j = 0; j < loc.dim() && worst < best; ++j) {
      if (std::isinf(radius[j])) continue;
      worst = std::max(worst, torus_distance(x[j], p[j]) / radius[j]);
    }
    best = std::min(best, worst);
  }
  return best;
}

}  // namespace

double Box::volume() const {
  double v = 1.0;
  for (int j = 0; j < dim(); ++j) v *= std::max(0.0, width(j));
  return v;
}

bool Box::contains(std::span<const double> x) const {
  for (int j = 0; j < dim(); ++j) {
    if (!(x[j] >= lower[j] && x[j] < upper[j])) return false;
  }
  return true;
}

bool Box::interior_contains(std::span<const double> x) const {
  for (int j = 0; j < dim(); ++j) {
    if (!(x[j] > lower[j] && x[j] < upper[j])) return false;
  }
  return true;
}

PointLocator::PointLocator(const PointSet& points)
    : d_(points.dim()), m_(points.size()), coords_(points.torus_coordinates()) {
  const double per_axis = std::pow(static_cast<double>(std::max<std::size_t>(m_, 1)), 1.0 / d_);
  const int b = std::clamp(static_cast<int>(per_axis), 1, 4096);
  buckets_per_axis_.assign(static_cast<std::size_t>(d_), b);
  std::size_t total = 1;
  for (int v : buckets_per_axis_) total *= static_cast<std::size_t>(v);
  std::vector<std::size_t> key(m_);
  std::vector<std::size_t> count(total + 1, 0);
  for (std::size_t i = 0; i < m_; ++i) {
    std::size_t k = 0;
    for (int j = 0; j < d_; ++j) {
      const int bj = buckets_per_axis_[j];
      const int c = std::min(bj - 1, static_cast<int>(coords_[i * d_ + j] / kTwoPi * bj));
      k = k * static_cast<std::size_t>(bj) + static_cast<std::size_t>(std::max(c, 0));
    }
    key[i] = k;
    ++count[k + 1];
  }
  for (std::size_t k = 0; k < total; ++k) count[k + 1] += count[k];
  bucket_start_ = count;
  order_.resize(m_);
  for (std::size_t i = 0; i < m_; ++i) order_[count[key[i]]++] = i;
}

void PointLocator::for_each_near(std::span<const double> x, std::span<const double> radius,
                                 const std::function<void(std::size_t)>& visit) const {
  std::vector<std::vector<std::uint64_t>> ranges(static_cast<std::size_t>(d_));
  for (int j = 0; j < d_; ++j) {
    const int b = buckets_per_axis_[j];
    if (std::isinf(radius[j]) || 2.0 * radius[j] >= kTwoPi * (1.0 - 2.0 / b)) {
      for (int c = 0; c < b; ++c) ranges[j].push_back(static_cast<std::uint64_t>(c));
      continue;
    }
    const long lo = static_cast<long>(std::floor((x[j] - radius[j]) / kTwoPi * b)) - 1;
    const long hi = static_cast<long>(std::floor((x[j] + radius[j]) / kTwoPi * b)) + 1;
    for (long c = lo; c <= hi && c - lo < b; ++c) {
      ranges[j].push_back(static_cast<std::uint64_t>(((c % b) + b) % b));
    }
  }
  for_each_product(ranges, [&](const std::vector<std::uint64_t>& cell) {
    std::size_t k = 0;
    for (int j = 0; j < d_; ++j) k = k * static_cast<std::size_t>(buckets_per_axis_[j]) + cell[j];
    for (std::size_t at = bucket_start_[k]; at < bucket_start_[k + 1]; ++at) {
      const std::size_t i = order_[at];
      bool near = true;
      for (int j = 0; j < d_ && near; ++j) {
        near = std::isinf(radius[j]) || torus_distance(coords_[i * d_ + j], x[j]) <= radius[j];
      }
      if (near) visit(i);
    }
  });
}

bool PointLocator::any_near(std::span<const double> x, std::span<const double> radius) const {
  bool found = false;
  for_each_near(x, radius, [&](std::size_t) { found = true; });
  return found;
}

std::vector<double> covering_radius(const FrequencyBox& box) {
  std::vector<double> r;
  for (int n : box.degrees()) r.push_back(n == 0 ? kInf : 1.0 / (2.0 * box.dim() * n));
  return r;
}

CoveringResult covering_certificate(const PointSet& points, const FrequencyBox& box) {
  if (points.dim() != box.dim()) throw std::invalid_argument("dimension mismatch");
  const int d = box.dim();
  CoveringResult result;
  result.radius = covering_radius(box);
  if (points.empty()) {
    result.status = CoveringStatus::fail;
    result.method = "empty";
    result.witness = std::vector<double>(static_cast<std::size_t>(d), 0.0);
    result.witness_gap = kInf;
    return result;
  }

  // Every cell no wider than the radius holds a point.
  std::vector<int> levels;
  int total_level = 0;
  for (double r : result.radius) {
    levels.push_back(cell_level(r));
    total_level += levels.back();
  }
  if (total_level <= 30) {
    std::vector<bool> occupied(std::size_t{1} << total_level, false);
    for (std::size_t i = 0; i < points.size(); ++i) {
      std::uint64_t key = 0;
      for (int j = 0; j < d; ++j) key = (key << levels[j]) | cell_of(points, i, j, levels[j]);
      occupied[key] = true;
    }
    if (std::all_of(occupied.begin(), occupied.end(), [](bool b) { return b; })) {
      result.status = CoveringStatus::pass;
      result.method = "dyadic_cells";
      return result;
    }
  }

  // Probe grid with spacing <= radius / 2 and shrunk radius.
  result.method = "probe_grid";
  std::vector<std::uint64_t> probes(static_cast<std::size_t>(d));
  std::vector<double> spacing(static_cast<std::size_t>(d));
  std::vector<double> shrunk(static_cast<std::size_t>(d));
  double total = 1.0;
  for (int j = 0; j < d; ++j) {
    const double r = result.radius[j];
    probes[j] = std::isinf(r) ? 1 : static_cast<std::uint64_t>(std::ceil(kTwoPi / (r / 2.0)));
    spacing[j] = kTwoPi / static_cast<double>(probes[j]);
    shrunk[j] = std::isinf(r) ? kInf : r - spacing[j] / 2.0;
    total *= static_cast<double>(probes[j]);
  }
  if (total > static_cast<double>(std::uint64_t{1} << 26)) {
    result.status = CoveringStatus::inconclusive;
    result.method = "probe_grid_too_large";
    return result;
  }
  auto index_of = [&](const std::vector<std::uint64_t>& idx) {
    std::uint64_t k = 0;
    for (int j = 0; j < d; ++j) k = k * probes[j] + idx[j];
    return k;
  };
  auto center = [&](int j, std::uint64_t i) { return (static_cast<double>(i) + 0.5) * spacing[j]; };

  std::vector<bool> marked(static_cast<std::size_t>(total), false);
  const std::vector<double> coords = points.torus_coordinates();
  std::vector<std::vector<std::uint64_t>> lists(static_cast<std::size_t>(d));
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (int j = 0; j < d; ++j) {
      lists[j].clear();
      const double x = coords[i * d + j];
      if (probes[j] == 1) {
        lists[j].push_back(0);
        continue;
      }
      const auto p = static_cast<long>(probes[j]);
      const long lo = static_cast<long>(std::floor((x - shrunk[j]) / spacing[j])) - 1;
      const long hi = static_cast<long>(std::floor((x + shrunk[j]) / spacing[j])) + 1;
      for (long c = lo; c <= hi && c - lo < p; ++c) {
        const auto w = static_cast<std::uint64_t>(((c % p) + p) % p);
        if (torus_distance(center(j, w), x) <= shrunk[j] * (1.0 - 1e-12)) lists[j].push_back(w);
      }
    }
    for_each_product(lists, [&](const std::vector<std::uint64_t>& idx) { marked[index_of(idx)] = true; });
  }

  const PointLocator locator(points);
  std::vector<std::uint64_t> violating;
  bool unresolved = false;
  std::vector<std::uint64_t> idx(static_cast<std::size_t>(d), 0);
  std::vector<double> x(static_cast<std::size_t>(d));
  std::vector<double> grown(result.radius);
  for (double& r : grown) r *= 1.0 + 1e-12;
  for (std::uint64_t k = 0; k < marked.size(); ++k) {
    if (!marked[k]) {
      for (int j = 0; j < d; ++j) x[j] = center(j, idx[j]);
      if (locator.any_near(x, grown)) {
        unresolved = true;
      } else {
        violating.push_back(k);
      }
    }
    for (int j = d - 1; j >= 0 && ++idx[j] == probes[j]; --j) idx[j] = 0;
  }
  if (violating.empty()) {
    result.status = unresolved ? CoveringStatus::inconclusive : CoveringStatus::pass;
    return result;
  }
  result.status = CoveringStatus::fail;
  // Largest gap among an evenly spaced sample of the violating probes.
  const std::size_t cap =
      std::max<std::size_t>(64, (std::size_t{1} << 22) / std::max<std::size_t>(points.size(), 1));
  const std::size_t stride = std::max<std::size_t>(1, violating.size() / cap);
  double best_gap = -1.0;
  for (std::size_t v = 0; v < violating.size(); v += stride) {
    std::uint64_t rest = violating[v];
    for (int j = d - 1; j >= 0; --j) {
      x[j] = center(j, rest % probes[j]);
      rest /= probes[j];
    }
    const double gap = normalized_gap(locator, x, result.radius);
    if (gap > best_gap) {
      best_gap = gap;
      result.witness = x;
    }
  }
  result.witness_gap = best_gap;
  return result;
}

CoveringResult covering_certificate(const DigitalNet& net, const FrequencyBox& box) {
  if (net.dim() != box.dim()) throw std::invalid_argument("dimension mismatch");
  CoveringResult result;
  result.radius = covering_radius(box);
  std::vector<int> levels;
  int total = 0;
  for (double r : result.radius) {
    levels.push_back(cell_level(r));
    total += levels.back();
  }
  if (total <= net.exponent() && net.has_full_rank(levels)) {
    result.status = CoveringStatus::pass;
    result.method = "net_rank";
    return result;
  }
  if (net.exponent() <= kMaxMaterializedExponent) {
    return covering_certificate(net.points().scale_to_torus(), box);
  }
  result.status = CoveringStatus::inconclusive;
  result.method = "net_rank";
  return result;
}

DensityProfile density_profile(const PointSet& points, const FrequencyBox& box) {
  if (points.dim() != box.dim()) throw std::invalid_argument("dimension mismatch");
  const int d = box.dim();
  DensityProfile profile;
  profile.box = box;
  std::uint64_t cells = 1;
  for (int n : box.degrees()) {
    profile.cells_per_axis.push_back(4 * std::max(n, 1));
    cells *= static_cast<std::uint64_t>(profile.cells_per_axis.back());
    if (cells > (std::uint64_t{1} << 28)) throw std::out_of_range("too many density cells");
  }
  profile.counts.assign(cells, 0);
  for (std::size_t i = 0; i < points.size(); ++i) {
    std::uint64_t key = 0;
    for (int j = 0; j < d; ++j) {
      const auto c = static_cast<std::uint64_t>(profile.cells_per_axis[j]);
      std::uint64_t index;
      if (points.is_dyadic()) {
        const unsigned __int128 scaled = static_cast<unsigned __int128>(points.numerator(i, j)) * c;
        index = static_cast<std::uint64_t>(scaled >> points.exponent());
      } else {
        // Points within rounding of a boundary belong to the cell above it.
        double v = points.unit_coordinate(i, j) * static_cast<double>(c);
        const double nearest = std::nearbyint(v);
        if (std::abs(v - nearest) <= 1e-9 * static_cast<double>(c)) v = nearest;
        index = static_cast<std::uint64_t>(std::floor(v)) % c;
      }
      key = key * c + index;
    }
    ++profile.counts[key];
  }
  profile.total = points.size();
  profile.max_count = *std::max_element(profile.counts.begin(), profile.counts.end());
  profile.min_count = *std::min_element(profile.counts.begin(), profile.counts.end());
  return profile;
}

nlohmann::json to_json(const Box& box) { return {{"u", box.lower}, {"v", box.upper}}; }

nlohmann::json to_json(const DispersionResult& result) {
  nlohmann::json j{{"volume", result.volume}, {"method", to_string(result.method)}};
  j["witness"] = result.witness ? to_json(*result.witness) : nlohmann::json(nullptr);
  if (result.method == DispersionMethod::dyadic_lower_bound) j["resolution"] = result.resolution;
  return j;
}

nlohmann::json to_json(const CoveringResult& result) {
  nlohmann::json radius = nlohmann::json::array();
  for (double r : result.radius) radius.push_back(std::isinf(r) ? nlohmann::json("inf") : nlohmann::json(r));
  nlohmann::json j{{"status", to_string(result.status)}, {"method", result.method}, {"radius", radius}};
  if (result.witness) {
    j["witness"] = *result.witness;
    j["witness_gap"] = result.witness_gap;
  }
  return j;
}

nlohmann::json to_json(const DensityProfile& profile, bool with_counts) {
  nlohmann::json j{{"N", profile.box.degrees()},
                   {"cells_per_axis", profile.cells_per_axis},
                   {"b_max", profile.max_count},
                   {"b_min", profile.min_count},
                   {"m", profile.total},
                   {"uniform", profile.uniform()}};
  if (with_counts) j["counts"] = profile.counts;
  return j;
}

const char* to_string(DispersionMethod method) {
  return method == DispersionMethod::exact ? "exact" : "dyadic_lower_bound";
}

const char* to_string(CoveringStatus status) {
  switch (status) {
    case CoveringStatus::pass: return "pass";
    case CoveringStatus::fail: return "fail";
    case CoveringStatus::inconclusive: return "inconclusive";
  }
  return "?";
}

}  // namespace unidisc
