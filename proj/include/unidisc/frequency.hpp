#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

namespace unidisc {

/// Integer frequency vector k in Z^d.
using Frequency = std::vector<int>;

/// The rectangle Pi(N) = [-N_1, N_1] x ... x [-N_d, N_d] of frequencies.
///
/// Coefficients attached to a box are laid out row-major with axis 0
/// slowest, k_j running from -N_j to N_j.
class FrequencyBox {
 public:
  FrequencyBox() = default;
  explicit FrequencyBox(std::vector<int> degrees);

  int dim() const { return static_cast<int>(degrees_.size()); }
  const std::vector<int>& degrees() const { return degrees_; }
  int degree(int axis) const { return degrees_[axis]; }
  /// Number of frequencies along one axis, 2 N_j + 1.
  int extent(int axis) const { return 2 * degrees_[axis] + 1; }

  /// theta(N) = prod (2 N_j + 1), the dimension of T(Pi(N)).
  std::uint64_t cardinality() const;
  /// v(N) = prod max(N_j, 1).
  std::uint64_t volume_index() const;

  bool contains(std::span<const int> k) const;
  /// Row-major position of k inside the box. k must be contained.
  std::size_t offset(std::span<const int> k) const;
  /// Inverse of offset().
  Frequency frequency_at(std::size_t offset) const;
  /// All frequencies in row-major order.
  std::vector<Frequency> frequencies() const;

  friend bool operator==(const FrequencyBox&, const FrequencyBox&) = default;

 private:
  std::vector<int> degrees_;
};

/// Dyadic level vector s; the subspace T(R(s)) has R(s) = Pi(2^s - 1).
struct SubspaceIndex {
  std::vector<int> s;

  int dim() const { return static_cast<int>(s.size()); }
  /// ||s||_1.
  int level() const;

  friend bool operator==(const SubspaceIndex&, const SubspaceIndex&) = default;
  friend auto operator<=>(const SubspaceIndex&, const SubspaceIndex&) = default;
};

/// Largest per-axis level accepted anywhere 2^s is formed.
inline constexpr int kMaxLevel = 30;

/// R(s) as a box: N_j = 2^{s_j} - 1. Throws std::out_of_range when 2^{s_j}
/// would not fit, std::invalid_argument on negative entries.
FrequencyBox box_of_s(const SubspaceIndex& s);

/// The box Pi(2^s) with N_j = 2^{s_j}.
FrequencyBox dyadic_box(const SubspaceIndex& s);

/// All s in Z_+^d with ||s||_1 = n, lexicographically ascending.
std::vector<SubspaceIndex> enumerate_compositions(int n, int d);

/// Exact binomial coefficient; throws std::overflow_error past 64 bits.
std::uint64_t binomial(int n, int k);

/// Q_n = union of R(s) over ||s||_1 = n, stored as a sorted list.
struct HyperbolicCross {
  int n = 0;
  int d = 0;
  std::vector<Frequency> frequencies;

  std::size_t size() const { return frequencies.size(); }
  bool contains(std::span<const int> k) const;
};

HyperbolicCross hyperbolic_cross(int n, int d);

nlohmann::json to_json(const FrequencyBox& box);
nlohmann::json to_json(const HyperbolicCross& cross);
/// Parses either {"kind":"box",...} or {"kind":"cross",...}; a cross is
/// returned through `cross`, a box through `box`. Returns the kind.
std::string frequency_set_from_json(const nlohmann::json& j, FrequencyBox& box,
                                    HyperbolicCross& cross);

/// Comma separated integers, e.g. "1,2,3".
std::vector<int> parse_int_list(const std::string& text);

}  // namespace unidisc
