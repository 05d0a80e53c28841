#include "unidisc/point_set.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <stdexcept>

namespace unidisc {

std::string to_string(Domain domain) {
  return domain == Domain::unit_cube ? "unit" : "torus2pi";
}

PointSet PointSet::dyadic(int d, int exponent, std::vector<std::uint64_t> numerators,
                          Domain domain) {
  if (d < 1) throw std::invalid_argument("point set dimension must be positive");
  if (exponent < 0 || exponent > 62) throw std::out_of_range("dyadic exponent out of range");
  if (numerators.size() % static_cast<std::size_t>(d) != 0) {
    throw std::invalid_argument("numerator count is not a multiple of d");
  }
  const std::uint64_t limit = std::uint64_t{1} << exponent;
  for (std::uint64_t v : numerators) {
    if (v >= limit) throw std::invalid_argument("dyadic numerator must be < 2^r");
  }
  PointSet p;
  p.d_ = d;
  p.domain_ = domain;
  p.dyadic_ = true;
  p.exponent_ = exponent;
  p.numerators_ = std::move(numerators);
  return p;
}

PointSet PointSet::floating(int d, std::vector<double> coords, Domain domain) {
  if (d < 1) throw std::invalid_argument("point set dimension must be positive");
  if (coords.size() % static_cast<std::size_t>(d) != 0) {
    throw std::invalid_argument("coordinate count is not a multiple of d");
  }
  const double upper = domain == Domain::unit_cube ? 1.0 : kTwoPi;
  for (double x : coords) {
    if (!(x >= 0.0 && x < upper)) throw std::invalid_argument("coordinate outside the domain");
  }
  PointSet p;
  p.d_ = d;
  p.domain_ = domain;
  p.coords_ = std::move(coords);
  return p;
}

PointSet PointSet::empty(int d, Domain domain) {
  return dyadic(d, 0, {}, domain);
}

std::size_t PointSet::size() const {
  if (d_ == 0) return 0;
  return (dyadic_ ? numerators_.size() : coords_.size()) / static_cast<std::size_t>(d_);
}

double PointSet::unit_coordinate(std::size_t i, int axis) const {
  const std::size_t at = i * static_cast<std::size_t>(d_) + static_cast<std::size_t>(axis);
  if (dyadic_) return std::ldexp(static_cast<double>(numerators_[at]), -exponent_);
  return domain_ == Domain::unit_cube ? coords_[at] : coords_[at] / kTwoPi;
}

double PointSet::torus_coordinate(std::size_t i, int axis) const {
  const std::size_t at = i * static_cast<std::size_t>(d_) + static_cast<std::size_t>(axis);
  if (dyadic_) return kTwoPi * std::ldexp(static_cast<double>(numerators_[at]), -exponent_);
  return domain_ == Domain::torus ? coords_[at] : kTwoPi * coords_[at];
}

double PointSet::coordinate(std::size_t i, int axis) const {
  return domain_ == Domain::unit_cube ? unit_coordinate(i, axis) : torus_coordinate(i, axis);
}

std::vector<double> PointSet::torus_coordinates() const {
  std::vector<double> out(size() * static_cast<std::size_t>(d_));
  for (std::size_t i = 0; i < size(); ++i) {
    for (int j = 0; j < d_; ++j) out[i * static_cast<std::size_t>(d_) + j] = torus_coordinate(i, j);
  }
  return out;
}

std::vector<double> PointSet::unit_coordinates() const {
  std::vector<double> out(size() * static_cast<std::size_t>(d_));
  for (std::size_t i = 0; i < size(); ++i) {
    for (int j = 0; j < d_; ++j) out[i * static_cast<std::size_t>(d_) + j] = unit_coordinate(i, j);
  }
  return out;
}

PointSet PointSet::scale_to_torus() const {
  if (domain_ == Domain::torus) return *this;
  PointSet p = *this;
  p.domain_ = Domain::torus;
  if (!dyadic_) {
    for (double& x : p.coords_) {
      x *= kTwoPi;
      if (x >= kTwoPi) x = std::nextafter(kTwoPi, 0.0);
    }
  }
  return p;
}

PointSet PointSet::to_unit() const {
  if (domain_ == Domain::unit_cube) return *this;
  PointSet p = *this;
  p.domain_ = Domain::unit_cube;
  if (!dyadic_) {
    for (double& x : p.coords_) {
      x /= kTwoPi;
      if (x >= 1.0) x = std::nextafter(1.0, 0.0);
    }
  }
  return p;
}

PointSet PointSet::without(const std::vector<std::size_t>& drop) const {
  std::vector<bool> removed(size(), false);
  for (std::size_t i : drop) {
    if (i < size()) removed[i] = true;
  }
  PointSet p = *this;
  p.numerators_.clear();
  p.coords_.clear();
  for (std::size_t i = 0; i < size(); ++i) {
    if (removed[i]) continue;
    for (int j = 0; j < d_; ++j) {
      const std::size_t at = i * static_cast<std::size_t>(d_) + j;
      if (dyadic_) {
        p.numerators_.push_back(numerators_[at]);
      } else {
        p.coords_.push_back(coords_[at]);
      }
    }
  }
  return p;
}

PointSet PointSet::merged_with(const PointSet& other) const {
  if (other.d_ != d_ || other.domain_ != domain_ || other.dyadic_ != dyadic_) {
    throw std::invalid_argument("cannot merge point sets of different kinds");
  }
  PointSet p = *this;
  if (dyadic_) {
    const int r = std::max(exponent_, other.exponent_);
    p.exponent_ = r;
    p.numerators_.clear();
    for (std::uint64_t v : numerators_) p.numerators_.push_back(v << (r - exponent_));
    for (std::uint64_t v : other.numerators_) p.numerators_.push_back(v << (r - other.exponent_));
  } else {
    p.coords_.insert(p.coords_.end(), other.coords_.begin(), other.coords_.end());
  }
  return p;
}

PointSet random_points(std::size_t m, int d, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  std::vector<double> coords(m * static_cast<std::size_t>(d));
  for (double& x : coords) {
    x = uniform(rng);
    if (x >= 1.0) x = std::nextafter(1.0, 0.0);
  }
  return PointSet::floating(d, std::move(coords), Domain::unit_cube);
}

PointSet scale_to_torus(const PointSet& points) { return points.scale_to_torus(); }

nlohmann::json to_json(const PointSet& points) {
  nlohmann::json j;
  j["d"] = points.dim();
  j["m"] = points.size();
  j["domain"] = to_string(points.domain());
  j["encoding"] = points.is_dyadic() ? "dyadic" : "float";
  j["r"] = points.is_dyadic() ? nlohmann::json(points.exponent()) : nlohmann::json(nullptr);
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t i = 0; i < points.size(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (int k = 0; k < points.dim(); ++k) {
      if (points.is_dyadic()) {
        row.push_back(points.numerator(i, k));
      } else {
        row.push_back(points.coordinate(i, k));
      }
    }
    rows.push_back(std::move(row));
  }
  j["points"] = std::move(rows);
  return j;
}

PointSet point_set_from_json(const nlohmann::json& j) {
  const int d = j.at("d").get<int>();
  const std::string dom = j.at("domain").get<std::string>();
  Domain domain;
  if (dom == "unit") {
    domain = Domain::unit_cube;
  } else if (dom == "torus2pi") {
    domain = Domain::torus;
  } else {
    throw std::invalid_argument("unknown point-set domain: " + dom);
  }
  const std::string encoding = j.at("encoding").get<std::string>();
  const auto& rows = j.at("points");
  PointSet result;
  if (encoding == "dyadic") {
    std::vector<std::uint64_t> nums;
    for (const auto& row : rows) {
      if (static_cast<int>(row.size()) != d) throw std::invalid_argument("point has wrong dimension");
      for (const auto& v : row) {
        if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
          throw std::invalid_argument("dyadic point-set entries must be nonnegative integers");
        }
        nums.push_back(v.get<std::uint64_t>());
      }
    }
    result = PointSet::dyadic(d, j.at("r").get<int>(), std::move(nums), domain);
  } else if (encoding == "float") {
    std::vector<double> coords;
    for (const auto& row : rows) {
      if (static_cast<int>(row.size()) != d) throw std::invalid_argument("point has wrong dimension");
      for (const auto& v : row) coords.push_back(v.get<double>());
    }
    result = PointSet::floating(d, std::move(coords), domain);
  } else {
    throw std::invalid_argument("unknown point-set encoding: " + encoding);
  }
  if (j.contains("m") && j.at("m").get<std::size_t>() != result.size()) {
    throw std::invalid_argument("point-set header m does not match the number of points");
  }
  return result;
}

std::string to_csv(const PointSet& points) {
  std::string out;
  char buf[32];
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (int k = 0; k < points.dim(); ++k) {
      if (k > 0) out += ',';
      std::snprintf(buf, sizeof buf, "%.17g", points.coordinate(i, k));
      out += buf;
    }
    out += '\n';
  }
  return out;
}

}  // namespace unidisc
