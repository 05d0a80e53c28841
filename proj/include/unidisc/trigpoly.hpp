#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include <json.hpp>

#include "unidisc/frequency.hpp"
#include "unidisc/point_set.hpp"

namespace unidisc {

using Complex = std::complex<double>;

/// f(x) = sum_k c_k exp(i (k, x)) on the torus [0, 2 pi)^d.
///
/// Dense polynomials carry one coefficient per frequency of a box, in the
/// box's row-major order. Sparse polynomials carry an explicit frequency
/// list (used for hyperbolic crosses).
class TrigPolynomial {
 public:
  TrigPolynomial() = default;
  TrigPolynomial(FrequencyBox box, std::vector<Complex> coeffs);
  TrigPolynomial(int d, std::vector<Frequency> freqs, std::vector<Complex> coeffs);

  static TrigPolynomial zero(const FrequencyBox& box);
  static TrigPolynomial constant(int d, Complex value);
  static TrigPolynomial monomial(const Frequency& k, Complex value = 1.0);

  int dim() const { return d_; }
  bool is_dense() const { return dense_; }
  /// The box itself for dense polynomials, the smallest enclosing box otherwise.
  const FrequencyBox& bounding_box() const { return box_; }
  std::size_t size() const { return coeffs_.size(); }
  const std::vector<Complex>& coefficients() const { return coeffs_; }
  Frequency frequency(std::size_t index) const;
  /// Coefficient at k, zero when k is not stored.
  Complex coefficient(std::span<const int> k) const;

  Complex operator()(std::span<const double> x) const;

  /// Reusable work space for repeated pointwise evaluation.
  struct EvalBuffers {
    std::vector<std::vector<Complex>> exponentials;
    std::vector<Complex> scratch;
  };
  Complex evaluate_with(std::span<const double> x, EvalBuffers& buffers) const;

  TrigPolynomial to_dense() const;
  TrigPolynomial scaled(Complex factor) const;

 private:
  int d_ = 0;
  bool dense_ = true;
  FrequencyBox box_;
  std::vector<Frequency> freqs_;
  std::vector<Complex> coeffs_;
};

/// Value at a single point.
Complex evaluate(const TrigPolynomial& f, std::span<const double> x);
/// Values at every point of a set (converted to torus coordinates).
std::vector<Complex> evaluate(const TrigPolynomial& f, const PointSet& points);
/// Values at flat torus coordinates, `count` points of dimension f.dim().
std::vector<Complex> evaluate_flat(const TrigPolynomial& f, std::span<const double> coords);
/// Values on the tensor product of per-axis node lists, row-major.
std::vector<Complex> evaluate_tensor_grid(const TrigPolynomial& f,
                                          const std::vector<std::vector<double>>& axis_nodes);
/// Equispaced per-axis nodes 2 pi i / M_j.
std::vector<std::vector<double>> equispaced_nodes(std::span<const int> counts);

enum class KernelKind { dirichlet, fejer, vallee_poussin };

/// D_n(x) = sum_{|k|<=n} e^{ikx}.
TrigPolynomial dirichlet(int n);
/// K_n = n^{-1} sum_{k<n} D_k, degree n - 1, coefficients 1 - |k|/n.
TrigPolynomial fejer(int n);
/// V_n = 2 K_{2n} - K_n, degree 2n - 1.
TrigPolynomial vallee_poussin(int n);
/// Product kernel prod_j kernel(orders[j])(x_j).
TrigPolynomial tensor_kernel(KernelKind kind, std::span<const int> orders);

/// Closed-form kernel values.
double dirichlet_value(int n, double x);
double fejer_value(int n, double x);
double vallee_poussin_value(int n, double x);
double kernel_value(KernelKind kind, int n, double x);
double tensor_kernel_value(KernelKind kind, std::span<const int> orders,
                           std::span<const double> x);

/// g(x) = f(x - w): c_k -> c_k e^{-i(k,w)}.
TrigPolynomial translate(const TrigPolynomial& f, std::span<const double> w);

enum class SampleKind { gaussian, spike };

/// Test polynomial on a box. Gaussian: i.i.d. standard complex normal
/// coefficients (E|c_k|^2 = 1). Spike: D_N(x - w) with w uniform on the torus.
TrigPolynomial random_poly(const FrequencyBox& box, std::uint64_t seed, SampleKind kind);

/// Periodic distance on [0, 2 pi).
double torus_distance(double a, double b);

nlohmann::json to_json(const TrigPolynomial& f);
TrigPolynomial trig_polynomial_from_json(const nlohmann::json& j);

const char* to_string(SampleKind kind);
const char* to_string(KernelKind kind);

}  // namespace unidisc
