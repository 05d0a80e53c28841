#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "unidisc/frequency.hpp"
#include "unidisc/geometry.hpp"
#include "unidisc/norms.hpp"
#include "unidisc/point_set.hpp"
#include "unidisc/pointsets.hpp"
#include "unidisc/trigpoly.hpp"

namespace unidisc {

/// Points on the torus, either listed or given implicitly by a digital net.
/// Implicit sources only answer neighbourhood queries.
class PointSource {
 public:
  static PointSource listed(const PointSet& points, std::string descriptor = "points");
  static PointSource net(const DigitalNet& net, std::string descriptor = "net");

  int dim() const { return d_; }
  std::uint64_t size() const { return m_; }
  bool is_listed() const { return static_cast<bool>(points_); }
  const std::string& descriptor() const { return descriptor_; }
  /// Torus point set; throws for implicit sources.
  const PointSet& points() const;
  /// Flat torus coordinates of a listed source.
  std::span<const double> coordinates() const;

  /// Flat torus coordinates of the points within per-axis torus distance
  /// `radius` of x, at most `cap` of them.
  std::vector<double> near(std::span<const double> x, std::span<const double> radius,
                           std::size_t cap = 1 << 16) const;

 private:
  int d_ = 0;
  std::uint64_t m_ = 0;
  std::string descriptor_;
  std::shared_ptr<const PointSet> points_;
  std::shared_ptr<const std::vector<double>> coords_;
  std::shared_ptr<const PointLocator> locator_;
  std::shared_ptr<const DigitalNet> net_;
};

/// How the discrete side of a ratio is computed.
///   exhaustive: every point.
///   local:      sup-norm only; points near the located peak of |f|. This
///               lower-bounds max |f(xi)|, so C1 stays conservative.
///   automatic:  exhaustive when affordable, else local.
enum class EvaluationMode { exhaustive, local, automatic };

struct SweepOptions {
  int n = 0;
  int d = 1;
  double q = 2.0;
  int samples = 200;
  int spikes = 50;
  std::uint64_t seed = 1;
  /// Restrict the sweep to a single member of the collection.
  std::optional<SubspaceIndex> only;
  EvaluationMode evaluation = EvaluationMode::automatic;
  /// Relative slack of the certified sup-norm bracket.
  double linf_slack = 0.1;
};

struct SampleWitness {
  std::size_t sample = 0;
  SampleKind kind = SampleKind::gaussian;
  double ratio = 0.0;
};

struct SubspaceRecord {
  SubspaceIndex s;
  double min_ratio = 0.0;
  double max_ratio = 0.0;
  SampleWitness worst_low;
  SampleWitness worst_high;
  std::size_t samples = 0;
};

/// Ratios are (1/m) sum |f(xi)|^q / ||f||_q^q for finite q and
/// max |f(xi)| / ||f||_inf otherwise. For the sup norm, the low side divides
/// by the upper end of the certified bracket and the high side by the lower.
struct UniversalityReport {
  int n = 0;
  int d = 0;
  double q = 2.0;
  std::string descriptor;
  std::uint64_t m = 0;
  int samples = 0;
  int spikes = 0;
  std::uint64_t seed = 0;
  std::string evaluation;
  double linf_slack = 0.0;
  double c1_hat = 0.0;
  double c2_hat = 0.0;
  std::vector<SubspaceRecord> subspaces;
};

UniversalityReport sweep(const PointSource& source, const SweepOptions& options);

nlohmann::json to_json(const UniversalityReport& report);
/// One row per member of the collection.
std::string to_csv(const UniversalityReport& report);

/// Test polynomial `sample` for member s: indices below `gaussians` are
/// Gaussian, the rest spikes. Depends only on (seed, member index, sample).
TrigPolynomial sweep_sample(const FrequencyBox& box, std::uint64_t seed, std::size_t member,
                            std::size_t sample, int gaussians);

/// Empty box search and the translated Fejer kernel it supports.
struct WitnessResult {
  bool found = false;
  SubspaceIndex s;
  Box box;
  /// Box center in [0,1)^d; the kernel is centered at 2 pi w.
  std::vector<double> center;
  /// min_j width_j 2^{s_j}; at least 2^{a_min} when found.
  double margin = 0.0;
  int a_min = 0;
  double peak = 0.0;
  double max_on_points = 0.0;
  double ratio = 0.0;
  std::string search;
};

enum class WitnessSearch { exact, dyadic, automatic };

/// Looks for s with ||s||_1 = n and an empty box of widths >= 2^{a_min - s_j}
/// in a unit-cube set; evaluates f = K_{2^s}(x - 2 pi w) on the points.
WitnessResult fejer_witness(const PointSet& points, int n, int a_min,
                            WitnessSearch search = WitnessSearch::automatic);

nlohmann::json to_json(const WitnessResult& w);

/// Sampled form of the factor-two sup-norm bound: for each member the covering
/// certificate at N = 2^s, then for every sample the largest |f| over the
/// points near the located peak against the attained peak value.
struct CoveringFactorRecord {
  SubspaceIndex s;
  CoveringStatus covering = CoveringStatus::inconclusive;
  std::string covering_method;
  double min_ratio = 0.0;
  std::size_t samples = 0;
  std::size_t violations = 0;
};

struct CoveringFactorReport {
  int n = 0;
  int d = 0;
  std::uint64_t m = 0;
  std::vector<CoveringFactorRecord> subspaces;
  double min_ratio = 0.0;
  std::size_t violations = 0;
  bool all_covered = false;
};

CoveringFactorReport covering_factor_check(const UniversalConstruction& construction, int samples,
                                           int spikes, std::uint64_t seed);

nlohmann::json to_json(const CoveringFactorReport& r);

/// Smallest margin a in [a_lo, a_hi] whose L_q construction reaches
/// C1_hat >= target at every level in `levels`.
struct MarginSearchStep {
  int a = 0;
  std::vector<UniversalityReport> reports;
  bool accepted = false;
};

struct MarginSearchResult {
  std::optional<int> a;
  std::vector<MarginSearchStep> steps;
};

MarginSearchResult search_margin(const std::vector<int>& levels, int d, double q, double target,
                                 int a_lo, int a_hi, int samples, int spikes, std::uint64_t seed);

struct ComparisonRow {
  std::string family;
  std::uint64_t m = 0;
  double c1_hat = 0.0;
  double c2_hat = 0.0;
};

/// Universal net, sparse grid and i.i.d. uniform points of the net's size,
/// each swept over the same collection.
std::vector<ComparisonRow> compare_constructions(int n, int d, double q, int samples, int spikes,
                                                 std::uint64_t seed, int a_dq = 4);

std::string to_csv(const std::vector<ComparisonRow>& rows);
nlohmann::json to_json(const ComparisonRow& row);

// Kernel and operator measurements on the quarter-spaced partition.

/// sup over sampled x of sum_nu |V_N(x - xi)| / (b v(N)), b the largest
/// cell count. Samples: `x_samples` uniform points plus the set points.
struct KernelSumResult {
  double value = 0.0;
  std::vector<double> argmax;
  std::uint64_t b_max = 0;
  std::uint64_t volume_index = 0;
};

KernelSumResult kernel_sum_check(const PointSet& points, const FrequencyBox& box, int x_samples,
                                 std::uint64_t seed);

enum class CoefficientFamily { gaussian, signs, aligned };

/// ||(1/m) sum a_nu V_N(. - xi)||_q / ((b c/m)^{1-1/q} ||a||_{l_q(m)}),
/// maximized over trials, where c = prod 4 max(N_j, 1) counts the cells
/// holding at most b points each, so b c / m >= 1. Trials cycle through Gaussian, random-sign and
/// aligned-sign vectors (signs of V_N(x0 - xi) at a random x0).
struct OperatorCheckResult {
  double max_ratio = 0.0;
  double max_gaussian = 0.0;
  double max_signs = 0.0;
  double max_aligned = 0.0;
  std::uint64_t b_max = 0;
  int trials = 0;
};

OperatorCheckResult vp_operator_check(const PointSet& points, const FrequencyBox& box, double q,
                                      int trials, std::uint64_t seed);
/// Same operator for a single coefficient vector.
double vp_operator_ratio(const PointSet& points, const FrequencyBox& box, double q,
                         std::span<const double> a, std::uint64_t b_max);

/// sup over random f in T(Pi(N)) of the discrete q-norm over ||f||_q.
struct OneSidedResult {
  double max_ratio = 0.0;
  std::uint64_t b_max = 0;
  bool enough_points = false;
  int trials = 0;
};

OneSidedResult one_sided_check(const PointSet& points, const FrequencyBox& box, double q, int trials,
                               std::uint64_t seed);

/// Snapping each point along one axis to the lower node of its cell for
/// N = 2^{s + margin - 2}; the mean change of |f|^q over random f in T(2^s),
/// divided by (K_j / N_j) ||f||_q^q with K = 2^s. Maximized over axes and trials.
struct SnapResult {
  double max_normalized = 0.0;
  double max_raw = 0.0;
  bool uniform_cells = false;
  std::uint64_t b_max = 0;
  int trials = 0;
};

SnapResult snap_compare(const PointSet& points, const SubspaceIndex& s, int margin, double q,
                        int trials, std::uint64_t seed);
/// Copy of `points` with axis `axis` snapped to the lower node of its cell.
PointSet snap_axis(const PointSet& points, const FrequencyBox& box, int axis);

nlohmann::json to_json(const KernelSumResult& r);
nlohmann::json to_json(const OperatorCheckResult& r);
nlohmann::json to_json(const OneSidedResult& r);
nlohmann::json to_json(const SnapResult& r);

const char* to_string(EvaluationMode mode);
/// "inf" or the shortest round-tripping decimal.
std::string format_q(double q);
double parse_q(const std::string& text);

}  // namespace unidisc
