#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "unidisc/frequency.hpp"
#include "unidisc/point_set.hpp"
#include "unidisc/pointsets.hpp"

namespace unidisc {

/// Axis-parallel box [lower, upper).
struct Box {
  std::vector<double> lower;
  std::vector<double> upper;

  int dim() const { return static_cast<int>(lower.size()); }
  double volume() const;
  double width(int axis) const { return upper[axis] - lower[axis]; }
  bool contains(std::span<const double> x) const;
  /// Strict interior membership.
  bool interior_contains(std::span<const double> x) const;
};

enum class DispersionMethod { exact, dyadic_lower_bound };

struct DispersionResult {
  double volume = 0.0;
  /// Absent only when the dyadic scan found no empty box.
  std::optional<Box> witness;
  DispersionMethod method = DispersionMethod::exact;
  /// Total dyadic resolution of the witness (dyadic method only).
  int resolution = 0;
};

/// Largest volume of a box in [0,1)^d free of points. The supremum over
/// half-open boxes equals the maximum over open boxes with faces at 0, 1 or
/// point coordinates; the witness is such a box, its interior is empty.
/// Ties go to the lexicographically smallest lower corner, then the largest
/// upper corner.
DispersionResult dispersion_exact(const PointSet& points, bool allow_large = false);

/// Largest empty dyadic box of total resolution at most ceil(log2 m);
/// zero when every such box is occupied.
DispersionResult dispersion_dyadic(const PointSet& points);

/// Calls visit(box) for a superset of the maximal empty open boxes of a
/// unit-cube point set. Every visited box has an empty interior.
void for_each_empty_box(const PointSet& points, const std::function<void(const Box&)>& visit,
                        bool allow_large = false);

/// Guards for exact dispersion: maximal m without allow_large.
std::size_t exact_dispersion_limit(int d);

/// Buckets points on the torus for per-axis radius queries.
class PointLocator {
 public:
  explicit PointLocator(const PointSet& points);

  /// Calls visit(i) for every point with torus distance <= radius[j] on each axis.
  void for_each_near(std::span<const double> x, std::span<const double> radius,
                     const std::function<void(std::size_t)>& visit) const;
  bool any_near(std::span<const double> x, std::span<const double> radius) const;
  std::span<const double> coordinates(std::size_t i) const {
    return {coords_.data() + i * static_cast<std::size_t>(d_), static_cast<std::size_t>(d_)};
  }
  std::size_t size() const { return m_; }
  int dim() const { return d_; }

 private:
  int d_;
  std::size_t m_;
  std::vector<double> coords_;
  std::vector<int> buckets_per_axis_;
  std::vector<std::size_t> bucket_start_;
  std::vector<std::size_t> order_;
};

enum class CoveringStatus { pass, fail, inconclusive };

struct CoveringResult {
  CoveringStatus status = CoveringStatus::inconclusive;
  std::string method;
  std::vector<double> radius;
  /// A torus point with no set point within the radius (fail only).
  std::optional<std::vector<double>> witness;
  /// max_j dist_j / radius_j to the nearest point from the witness.
  double witness_gap = 0.0;
};

/// Per-axis covering radius 1/(2 d N_j); infinite when N_j = 0.
std::vector<double> covering_radius(const FrequencyBox& box);

/// Certificate that every torus point has a set point within
/// 1/(2 d N_j) on each axis. Pass and fail are sound; inconclusive is not a
/// verdict.
CoveringResult covering_certificate(const PointSet& points, const FrequencyBox& box);
/// Same, decided from the rank structure of a digital net on the torus.
CoveringResult covering_certificate(const DigitalNet& net, const FrequencyBox& box);

/// Counts per cell of the quarter-spaced partition for a box.
struct DensityProfile {
  FrequencyBox box;
  std::vector<int> cells_per_axis;
  std::vector<std::uint64_t> counts;
  std::uint64_t max_count = 0;
  std::uint64_t min_count = 0;
  std::uint64_t total = 0;

  /// Every cell holds the same number of points.
  bool uniform() const { return max_count == min_count; }
};

DensityProfile density_profile(const PointSet& points, const FrequencyBox& box);

nlohmann::json to_json(const Box& box);
nlohmann::json to_json(const DispersionResult& result);
nlohmann::json to_json(const CoveringResult& result);
nlohmann::json to_json(const DensityProfile& profile, bool with_counts = false);

const char* to_string(DispersionMethod method);
const char* to_string(CoveringStatus status);

}  // namespace unidisc
