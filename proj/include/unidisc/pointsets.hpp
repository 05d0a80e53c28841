#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "unidisc/frequency.hpp"
#include "unidisc/point_set.hpp"

namespace unidisc {

// Tensor grids

enum class GridKind {
  /// Nodes 2 pi n_j / (2 N_j + 1), 0 <= n_j <= 2 N_j; theta(N) nodes.
  P,
  /// Nodes pi n_j / (2 Nbar_j), 0 <= n_j < 4 Nbar_j; v(4N) nodes.
  Pprime,
};

/// A tensor-product grid attached to a frequency box.
///
/// For the quarter-spaced kind the node x(n) is the lower corner of the
/// half-open cell [x(n), x(n + 1)); cells partition the torus. An axis with
/// N_j = 0 is treated as N_j = 1, which leaves T(Pi(N)) unaffected.
class GridSpec {
 public:
  GridSpec(FrequencyBox box, GridKind kind);

  const FrequencyBox& box() const { return box_; }
  GridKind kind() const { return kind_; }
  int dim() const { return box_.dim(); }
  int nodes_per_axis(int axis) const { return counts_[axis]; }
  const std::vector<int>& counts() const { return counts_; }
  std::uint64_t size() const;

  double node(int axis, int index) const;
  std::vector<std::vector<double>> axis_nodes() const;
  /// Cell index along `axis` containing the torus coordinate x.
  int cell_index(int axis, double x) const;

  /// All nodes as a torus point set (dyadic when every count is a power of two).
  PointSet points() const;

 private:
  FrequencyBox box_;
  GridKind kind_;
  std::vector<int> counts_;
};

GridSpec tensor_grid(const FrequencyBox& box, GridKind kind);

/// Union of the quarter-spaced grids for N = 2^s over ||s||_1 = n,
/// deduplicated, as an exact dyadic torus set with exponent n + 2.
PointSet sparse_grid(int n, int d);

// Digital nets over GF(2)

inline constexpr int kMaxNetDim = 8;
inline constexpr int kMaxNetExponent = 30;
/// Nets above this exponent are handled implicitly, never listed.
inline constexpr int kMaxMaterializedExponent = 22;

/// 2^r points in [0,1)^d. The axis-j numerator of point i is the GF(2)
/// combination of the columns selected by the bits of i (bit k selects
/// column k); numerators carry r bits.
class DigitalNet {
 public:
  DigitalNet(int d, int r, std::vector<std::vector<std::uint64_t>> columns,
             std::optional<int> declared_t = std::nullopt);

  int dim() const { return d_; }
  int exponent() const { return r_; }
  std::uint64_t size() const { return std::uint64_t{1} << r_; }
  std::optional<int> declared_t() const { return declared_t_; }
  const std::vector<std::vector<std::uint64_t>>& columns() const { return columns_; }

  std::uint64_t numerator(std::uint64_t i, int axis) const;

  /// True when every dyadic box with k_j leading bits fixed on axis j holds
  /// exactly 2^{r - sum k} points.
  bool has_full_rank(const std::vector<int>& shape) const;
  /// Smallest t with full rank for every shape of total r - t.
  int quality() const;

  /// Indices of the points in the dyadic box with leading bits `cell` at
  /// resolution `shape`; at most `limit` indices.
  std::vector<std::uint64_t> indices_in_box(const std::vector<int>& shape,
                                            const std::vector<std::uint64_t>& cell,
                                            std::size_t limit =
                                                std::numeric_limits<std::size_t>::max()) const;

  /// Exact unit-cube point set; throws std::length_error above the
  /// materialization limit.
  PointSet points() const;

 private:
  int d_;
  int r_;
  std::vector<std::vector<std::uint64_t>> columns_;
  // rows_[j][b] selects the input bits that produce output bit r - 1 - b.
  std::vector<std::vector<std::uint64_t>> rows_;
  std::optional<int> declared_t_;
};

/// Identity on axis 0, bit reversal on axis 1, Sobol direction numbers
/// beyond. d in [1, 8], r in [0, 30].
DigitalNet default_generator_matrices(int d, int r);
PointSet net_points(const DigitalNet& net);

struct DyadicBoxRef {
  std::vector<int> shape;
  std::vector<std::uint64_t> cell;
  std::uint64_t count = 0;
};

struct NetCheck {
  bool pass = true;
  int t = 0;
  std::optional<DyadicBoxRef> witness;
};

/// Exhaustive check that every dyadic box of volume 2^{t-r} holds exactly
/// 2^t points, where |points| = 2^r.
NetCheck verify_net(const PointSet& points, int t);
/// Smallest t accepted by verify_net.
int minimal_t(const PointSet& points);

nlohmann::json to_json(const DyadicBoxRef& box);
nlohmann::json to_json(const NetCheck& check);

// Universal constructions

enum class UniversalMode { linf, lq };

struct UniversalConstructionParams {
  UniversalMode mode = UniversalMode::linf;
  int n = 0;
  int d = 1;
  /// Per-axis margin for the L_q construction.
  int a_dq = 4;
  /// Target norm index; informational only.
  double q = std::numeric_limits<double>::infinity();
};

/// 1 + floor(log2(4 d pi)).
int log_term(int d);

struct UniversalConstruction {
  UniversalConstructionParams params;
  int t = 0;
  int r = 0;
  /// Per-axis margin actually used (log_term or a_dq).
  int margin = 0;
  DigitalNet net;

  std::uint64_t size() const { return net.size(); }
};

/// r = n + t + margin d with t the measured quality of the net at r.
UniversalConstruction universal_net(const UniversalConstructionParams& params);
/// The construction's net scaled to the torus.
PointSet universal_set(const UniversalConstructionParams& params);

nlohmann::json to_json(const UniversalConstructionParams& params);
nlohmann::json construction_metadata(const UniversalConstruction& c);

const char* to_string(GridKind kind);
const char* to_string(UniversalMode mode);

}  // namespace unidisc
