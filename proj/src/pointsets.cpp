#include "unidisc/pointsets.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace unidisc {

GridSpec::GridSpec(FrequencyBox box, GridKind kind) : box_(std::move(box)), kind_(kind) {
  for (int n : box_.degrees()) {
    const int count = kind_ == GridKind::P ? 2 * n + 1 : 4 * std::max(n, 1);
    if (count < 1 || count > (1 << 28)) throw std::out_of_range("grid too large");
    counts_.push_back(count);
  }
}

std::uint64_t GridSpec::size() const {
  std::uint64_t total = 1;
  for (int c : counts_) total *= static_cast<std::uint64_t>(c);
  return total;
}

double GridSpec::node(int axis, int index) const {
  return kTwoPi * index / counts_[axis];
}

std::vector<std::vector<double>> GridSpec::axis_nodes() const {
  std::vector<std::vector<double>> out;
  for (int j = 0; j < dim(); ++j) {
    std::vector<double> axis(static_cast<std::size_t>(counts_[j]));
    for (int i = 0; i < counts_[j]; ++i) axis[i] = node(j, i);
    out.push_back(std::move(axis));
  }
  return out;
}

int GridSpec::cell_index(int axis, double x) const {
  const int c = counts_[axis];
  double v = x / kTwoPi * c;
  const double nearest = std::nearbyint(v);
  if (std::abs(v - nearest) <= 1e-9 * c) v = nearest;
  return ((static_cast<int>(std::floor(v)) % c) + c) % c;
}

PointSet GridSpec::points() const {
  const int d = dim();
  const std::uint64_t total = size();
  const bool dyadic = std::all_of(counts_.begin(), counts_.end(),
                                  [](int c) { return std::has_single_bit(static_cast<unsigned>(c)); });
  std::vector<int> index(static_cast<std::size_t>(d), 0);
  if (dyadic) {
    int exponent = 0;
    for (int c : counts_) exponent = std::max(exponent, std::countr_zero(static_cast<unsigned>(c)));
    std::vector<std::uint64_t> nums;
    nums.reserve(total * static_cast<std::uint64_t>(d));
    for (std::uint64_t p = 0; p < total; ++p) {
      for (int j = 0; j < d; ++j) {
        const int shift = exponent - std::countr_zero(static_cast<unsigned>(counts_[j]));
        nums.push_back(static_cast<std::uint64_t>(index[j]) << shift);
      }
      for (int j = d - 1; j >= 0 && ++index[j] == counts_[j]; --j) index[j] = 0;
    }
    return PointSet::dyadic(d, exponent, std::move(nums), Domain::torus);
  }
  std::vector<double> coords;
  coords.reserve(total * static_cast<std::uint64_t>(d));
  for (std::uint64_t p = 0; p < total; ++p) {
    for (int j = 0; j < d; ++j) coords.push_back(node(j, index[j]));
    for (int j = d - 1; j >= 0 && ++index[j] == counts_[j]; --j) index[j] = 0;
  }
  return PointSet::floating(d, std::move(coords), Domain::torus);
}

GridSpec tensor_grid(const FrequencyBox& box, GridKind kind) { return GridSpec(box, kind); }

PointSet sparse_grid(int n, int d) {
  if (n < 0) throw std::invalid_argument("level n must be nonnegative");
  if (n + 2 > 40) throw std::out_of_range("sparse grid level too large");
  const int exponent = n + 2;
  std::vector<std::vector<std::uint64_t>> rows;
  for (const auto& s : enumerate_compositions(n, d)) {
    std::vector<int> counts;
    std::uint64_t total = 1;
    for (int v : s.s) {
      counts.push_back(1 << (v + 2));
      total *= static_cast<std::uint64_t>(counts.back());
    }
    std::vector<int> index(static_cast<std::size_t>(d), 0);
    for (std::uint64_t p = 0; p < total; ++p) {
      std::vector<std::uint64_t> row(static_cast<std::size_t>(d));
      for (int j = 0; j < d; ++j) row[j] = static_cast<std::uint64_t>(index[j]) << (n - s.s[j]);
      rows.push_back(std::move(row));
      for (int j = d - 1; j >= 0 && ++index[j] == counts[j]; --j) index[j] = 0;
    }
  }
  std::sort(rows.begin(), rows.end());
  rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
  std::vector<std::uint64_t> nums;
  nums.reserve(rows.size() * static_cast<std::size_t>(d));
  for (const auto& row : rows) nums.insert(nums.end(), row.begin(), row.end());
  return PointSet::dyadic(d, exponent, std::move(nums), Domain::torus);
}

int log_term(int d) {
  if (d < 1) throw std::invalid_argument("dimension d must be positive");
  return 1 + static_cast<int>(std::floor(std::log2(4.0 * d * std::numbers::pi)));
}

UniversalConstruction universal_net(const UniversalConstructionParams& params) {
  if (params.n < 0) throw std::invalid_argument("level n must be nonnegative");
  if (params.d < 1 || params.d > kMaxNetDim) throw std::out_of_range("unsupported dimension d");
  const int margin = params.mode == UniversalMode::linf ? log_term(params.d) : params.a_dq;
  if (margin < 0) throw std::invalid_argument("margin a must be nonnegative");
  int t = 0;
  // The exponent depends on the quality, which is measured at that exponent;
  // iterate until the assumed quality covers the measured one.
  for (;;) {
    const int r = params.n + t + margin * params.d;
    if (r > kMaxNetExponent) {
      throw std::out_of_range("net exponent r = " + std::to_string(r) +
                              " exceeds the supported range; use a smaller n");
    }
    DigitalNet net = default_generator_matrices(params.d, r);
    const int measured = net.quality();
    if (measured <= t) {
      return UniversalConstruction{params, measured, r, margin, std::move(net)};
    }
    t = measured;
  }
}

PointSet universal_set(const UniversalConstructionParams& params) {
  return universal_net(params).net.points().scale_to_torus();
}

nlohmann::json to_json(const UniversalConstructionParams& params) {
  nlohmann::json j{{"mode", to_string(params.mode)}, {"n", params.n}, {"d", params.d}};
  if (params.mode == UniversalMode::lq) j["a"] = params.a_dq;
  if (std::isinf(params.q)) {
    j["q"] = "inf";
  } else {
    j["q"] = params.q;
  }
  return j;
}

nlohmann::json construction_metadata(const UniversalConstruction& c) {
  nlohmann::json j = to_json(c.params);
  j["t"] = c.t;
  j["r"] = c.r;
  j["m"] = c.size();
  j["margin"] = c.margin;
  if (c.params.mode == UniversalMode::linf) {
    j["log_term"] = c.margin;
    j["log_base"] = 2;
  }
  return j;
}

const char* to_string(GridKind kind) { return kind == GridKind::P ? "P" : "Pprime"; }

const char* to_string(UniversalMode mode) { return mode == UniversalMode::linf ? "linf" : "lq"; }

}  // namespace unidisc
