#pragma once

#include <cstdint>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

namespace unidisc {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

enum class Domain { unit_cube, torus };

/// A finite point set in [0,1)^d or on the torus [0, 2pi)^d.
///
/// Dyadic sets keep an integer numerator per coordinate together with a
/// shared exponent r, so the unit coordinate is numerator / 2^r and the
/// torus coordinate is 2 pi numerator / 2^r. Float sets store coordinates
/// in the units of their domain. Storage is flat, row-major (point-major).
class PointSet {
 public:
  PointSet() = default;

  static PointSet dyadic(int d, int exponent, std::vector<std::uint64_t> numerators,
                         Domain domain = Domain::unit_cube);
  static PointSet floating(int d, std::vector<double> coords, Domain domain);
  static PointSet empty(int d, Domain domain = Domain::unit_cube);

  int dim() const { return d_; }
  std::size_t size() const;
  bool empty() const { return size() == 0; }
  Domain domain() const { return domain_; }
  bool is_dyadic() const { return dyadic_; }
  /// Shared exponent r of a dyadic set.
  int exponent() const { return exponent_; }

  std::uint64_t numerator(std::size_t i, int axis) const {
    return numerators_[i * static_cast<std::size_t>(d_) + static_cast<std::size_t>(axis)];
  }
  /// Coordinate in [0,1).
  double unit_coordinate(std::size_t i, int axis) const;
  /// Coordinate in [0, 2 pi).
  double torus_coordinate(std::size_t i, int axis) const;
  /// Coordinate in the units of domain().
  double coordinate(std::size_t i, int axis) const;

  /// Flat torus coordinates of all points.
  std::vector<double> torus_coordinates() const;
  /// Flat unit-cube coordinates of all points.
  std::vector<double> unit_coordinates() const;

  const std::vector<std::uint64_t>& numerators() const { return numerators_; }

  /// Same points as a torus set; dyadic numerators are kept unchanged.
  PointSet scale_to_torus() const;
  /// Same points as a unit-cube set.
  PointSet to_unit() const;

  /// Points whose index is not listed in `drop`.
  PointSet without(const std::vector<std::size_t>& drop) const;
  /// Concatenation of two dyadic or two float sets of the same domain.
  PointSet merged_with(const PointSet& other) const;

 private:
  int d_ = 0;
  Domain domain_ = Domain::unit_cube;
  bool dyadic_ = false;
  int exponent_ = 0;
  std::vector<std::uint64_t> numerators_;
  std::vector<double> coords_;
};

/// m i.i.d. uniform points in [0,1)^d, deterministic per seed.
PointSet random_points(std::size_t m, int d, std::uint64_t seed);
/// Same as PointSet::scale_to_torus.
PointSet scale_to_torus(const PointSet& points);

nlohmann::json to_json(const PointSet& points);
PointSet point_set_from_json(const nlohmann::json& j);
/// One point per row, comma separated, in domain units.
std::string to_csv(const PointSet& points);

std::string to_string(Domain domain);

}  // namespace unidisc
