#pragma once

#include <functional>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "morrey/grid.hpp"

namespace morrey {

enum class GeneratorKind { Heat, Poisson };

/// A self-adjoint, nonnegative generator given by its radial Fourier symbol.
/// Heat: L = -Laplacian, a(xi) = |xi|^2, order m = 2.
/// Poisson: L = sqrt(-Laplacian), a(xi) = |xi|, order m = 1.
class GeneratorSpec {
 public:
  explicit constexpr GeneratorSpec(GeneratorKind kind) noexcept : kind_(kind) {}

  static constexpr GeneratorSpec heat() noexcept { return GeneratorSpec(GeneratorKind::Heat); }
  static constexpr GeneratorSpec poisson() noexcept {
    return GeneratorSpec(GeneratorKind::Poisson);
  }
  /// "heat" or "poisson".
  static GeneratorSpec from_name(std::string_view name);

  GeneratorKind kind() const noexcept { return kind_; }
  std::string_view name() const noexcept { return kind_ == GeneratorKind::Heat ? "heat" : "poisson"; }
  /// Scaling order m: kernels decay in |x - y| / t^(1/m).
  double order() const noexcept { return kind_ == GeneratorKind::Heat ? 2.0 : 1.0; }
  double symbol(double xi_magnitude) const noexcept {
    return kind_ == GeneratorKind::Heat ? xi_magnitude * xi_magnitude : xi_magnitude;
  }
  /// Supremum of admissible decay exponents epsilon of the kernel envelope.
  double theta() const noexcept {
    return kind_ == GeneratorKind::Heat ? std::numeric_limits<double>::infinity() : 1.0;
  }

  friend constexpr bool operator==(GeneratorSpec a, GeneratorSpec b) noexcept {
    return a.kind_ == b.kind_;
  }

 private:
  GeneratorKind kind_;
};

/// a(xi_k) for every spectral slot of the grid, FFT order.
std::vector<double> symbol_table(const Grid& grid, const GeneratorSpec& gen);

/// Smallest nonzero and largest symbol values on the grid.
struct SymbolRange {
  double min_nonzero;
  double max;
};
SymbolRange symbol_range(const Grid& grid, const GeneratorSpec& gen);

/// Applies the multiplier phi(a(xi_k)) to precomputed coefficients.
Field apply_symbol_function(const SpectralField& coefficients, std::span<const double> symbols,
                            const std::function<double(double)>& phi);

/// P_t f = exp(-tL) f. t = 0 returns f unchanged; t < 0 is rejected.
Field apply_P(const GeneratorSpec& gen, double t, const Field& f);

/// Q_t f = t L exp(-tL) f, t > 0.
Field apply_Q(const GeneratorSpec& gen, double t, const Field& f);

/// Discrete convolution weights w_d of P_t on the grid: (P_t g)(x) = sum_d w_d g(x - d).
/// Flat-indexed by offset; weights sum to one.
std::vector<double> semigroup_weights(const GeneratorSpec& gen, double t, const Grid& grid);

// ---------------------------------------------------------------------------
// Closed-form kernels on R^n.

/// Closed-form kernel data of the heat or Poisson semigroup in dimension n,
/// together with the radial envelopes used in the pointwise bounds.
///
/// Bounds are written in scaled form s = |x| / t^(1/m):
///   p_t(x)            = t^(-n/m) * kernel_profile(s)
///   |t d/dt p_t(x)|   <= derivative_constant * t^(-n/m) * derivative_envelope(s)
///   p_t(x)            <= decay_constant * t^(beta/m) / (t^(1/m) + |x|)^(n + beta)
class KernelProfile {
 public:
  KernelProfile(GeneratorKind kind, int dimension);

  GeneratorKind kind() const noexcept { return kind_; }
  int dimension() const noexcept { return n_; }
  double order() const noexcept { return kind_ == GeneratorKind::Heat ? 2.0 : 1.0; }

  /// p_t(x) for |x| = r.
  double kernel(double t, double r) const noexcept;
  /// t * d/dt p_t(x), analytic.
  double time_derivative(double t, double r) const noexcept;
  /// |grad_x p_t(x)|, analytic.
  double gradient_magnitude(double t, double r) const noexcept;

  /// g in p_t(x) <= c t^(-n/m) g(|x| / t^(1/m)); decreasing, r^(n+eps) g(r) -> 0.
  double envelope(double s) const noexcept;
  double envelope_constant() const noexcept { return 1.0; }
  /// Envelope for the first time derivative and for the Q kernel.
  double derivative_envelope(double s) const noexcept;
  double derivative_constant() const noexcept;
  /// Admissible epsilon bound: every epsilon below this works.
  double epsilon_sup() const noexcept;
  /// eps_0 = min(m, eps)/2 with eps taken as min(epsilon_sup, 1); diagnostic only.
  double epsilon_zero() const noexcept;

  /// beta of the polynomial decay bound.
  double decay_beta() const noexcept { return kind_ == GeneratorKind::Heat ? 2.0 : 1.0; }
  double decay_constant() const noexcept { return decay_constant_; }
  /// Hoelder exponent gamma of the smoothness bound (always 1).
  double holder_gamma() const noexcept { return 1.0; }
  double holder_constant() const noexcept { return holder_constant_; }

 private:
  GeneratorKind kind_;
  int n_;
  double norm_;  // (4 pi)^(-n/2) for heat, c_n for Poisson
  double decay_constant_;
  double holder_constant_;
};

/// c_n = Gamma((n+1)/2) / pi^((n+1)/2).
double poisson_constant(int dimension);

/// Closed-form p_t(x) at a point of R^n.
double kernel_eval(const KernelProfile& profile, double t, const Point& x);

/// Lattice-periodized kernel sampled at every grid offset, with an estimate of
/// the periodization truncation error.
struct PeriodizedKernel {
  std::vector<double> values;  // flat-indexed by offset, like Field samples
  double tail_estimate = 0.0;
};
PeriodizedKernel periodized_kernel(const KernelProfile& profile, double t, const Grid& grid);

/// Periodization error tolerated by cross_validate_kernel.
inline constexpr double kPeriodizationTailLimit = 1e-12;

/// max_x |(p_t^per * f)(x) - (P_t f)(x)| with the convolution evaluated as a
/// direct sum over the grid. Throws TruncationError when the periodized
/// kernel cannot be evaluated to kPeriodizationTailLimit.
double cross_validate_kernel(const GeneratorSpec& gen, const KernelProfile& profile, double t,
                             const Field& f);

struct BoundRecord {
  std::string bound_id;
  double recorded_constant = 0.0;
  double worst_constant = 0.0;
  std::vector<double> worst_sample;  // (t, x..., h...) as applicable
  std::size_t samples = 0;
  std::size_t violations = 0;
};

struct KernelBoundReport {
  std::vector<BoundRecord> records;
  std::size_t total_violations() const noexcept;
};

/// Pointwise check of the kernel bounds on the sample sets:
///   upper_bound        p_t <= c t^(-n/m) g(|x|/t^(1/m))
///   time_derivative    |t d/dt p_t| <= c t^(-n/m) g_1(|x|/t^(1/m))
///   q_kernel           |q_{t^m}(x)| <= c t^(-n) g_1(|x|/t)
///   polynomial_decay   p_t <= c t^(beta/m) / (t^(1/m) + |x|)^(n+beta)
///   holder             |p_t(x+h) - p_t(x)| + |p_t(x-h) - p_t(x)|
///                        <= c |h| t^(beta/m) / (t^(1/m)+|x|)^(n+beta+1),  2|h| <= t^(1/m)+|x|
///   radial_monotone    p_t(x) <= p_t(0)
/// Samples of the Hoelder bound that violate the |h| constraint are skipped.
KernelBoundReport verify_kernel_bounds(const KernelProfile& profile, std::span<const double> t_set,
                                       std::span<const Point> x_set, std::span<const Point> h_set);

}  // namespace morrey
