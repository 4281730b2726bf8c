#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "morrey/ball.hpp"
#include "morrey/grid.hpp"
#include "morrey/operators.hpp"
#include "morrey/quadrature.hpp"

namespace morrey {

/// Morrey exponents: 1 <= p < infinity, 0 < lambda < n.
struct MorreyParams {
  double p = 2.0;
  double lambda = 0.5;

  void validate(int dimension) const;
};

enum class SeminormKind {
  Classical,
  Semigroup,
  Maximal,
  PoissonPointwise,
  SquareFnPoisson,
  SquareFnL,
  CarlesonTent,
};

std::string_view to_string(SeminormKind kind) noexcept;
SeminormKind seminorm_kind_from_string(std::string_view name);

/// One evaluated sample of a sup: a ball (center, radius) or a point/time
/// pair (center, t).
struct SeminormSample {
  Index center{};
  double scale = 0.0;  // ball radius, or time t for pointwise sups
  double value = 0.0;
};

struct SeminormReport {
  SeminormKind kind{};
  double value = 0.0;
  SeminormSample witness;
  std::vector<SeminormSample> table;
  /// Upper estimate of the relative mass lost by truncating time integrals
  /// below t_min (square functions and tents only).
  double truncation_estimate = 0.0;
};

enum class EvaluationMethod { Auto, Direct, Windowed };

/// max_B [r_B^-lambda sum_B |f - f_B|^p h^n]^(1/p).
/// Auto uses the windowed p = 2 identity sum|f|^2 - |sum f|^2/count when p = 2.
SeminormReport classical_seminorm(const Field& f, const MorreyParams& params, const BallSet& balls,
                                  EvaluationMethod method = EvaluationMethod::Auto);

/// max_B [r_B^-lambda sum_B |f - P_{t_B} f|^p h^n]^(1/p), t_B = r_B^m.
SeminormReport semigroup_seminorm(const Field& f, const MorreyParams& params,
                                  const GeneratorSpec& gen, const BallSet& balls);

/// sup_(x,t) t^((n-lambda)/(pm)) [P_t(|f - P_t f|^p)(x)]^(1/p) over centers on
/// the stride lattice and t in t_set, t_set in (0, (L/4)^m].
SeminormReport maximal_seminorm(const Field& f, const MorreyParams& params, const GeneratorSpec& gen,
                                std::span<const double> t_set, int x_stride);

/// [sup_(x,t) t^(n-lambda) P_t(|f - (P_t f)(x)|^p)(x)]^(1/p) for the Poisson
/// semigroup; the inner constant is the semigroup average at the outer point.
SeminormReport poisson_pointwise_seminorm(const Field& f, const MorreyParams& params,
                                          const GeneratorSpec& gen, std::span<const double> t_set,
                                          int x_stride);

/// Pointwise check P_t(|f - P_t f(x)|^2)(x) = P_t|f|^2(x) - |P_t f(x)|^2.
/// The left side uses direct kernel sums, the right side the multiplier path.
/// Returns the largest absolute discrepancy over the samples.
struct PointTime {
  Index x{};
  double t = 0.0;
};
double variance_identity_discrepancy(const Field& f, const GeneratorSpec& gen,
                                     std::span<const PointTime> samples);

enum class SquareVariant {
  SquareFnL,        // A_t = Q_{t^m}(I - P_{t^m}) for the given generator
  SquareFnPoisson,  // A_t = t d/dt exp(-t sqrt(Laplacian))
};

/// max_B r_B^(-lambda/p) || [sum_{t_j <= r_B} |A_{t_j} f|^2 w_j]^(1/2) ||_{L^p(B)}.
SeminormReport square_function_seminorm(const Field& f, const MorreyParams& params,
                                        const GeneratorSpec& gen, const BallSet& balls,
                                        const LogTimeGrid& tgrid, SquareVariant variant);

/// max_B [mu_f(T(B)) / r_B^lambda]^(1/2), mu_f(T(B)) = sum_B sum_{t_j <= r_B}
/// |Q_{t^m}(I - P_{t^m}) f|^2 h^n w_j. Requires p = 2.
SeminormReport carleson_tent_norm(const Field& f, const MorreyParams& params,
                                  const GeneratorSpec& gen, const BallSet& balls,
                                  const LogTimeGrid& tgrid);

enum class SquareIntegrand {
  Q,            // psi(z) = z e^-z
  QComplement,  // psi(z) = z e^-z (1 - e^-z)
};

/// Global square function [sum_j |psi(t_j L) f|^2 w_j]^(1/2) over the whole
/// time grid, time variable t (no t^m substitution).
Field square_function_field(const Field& f, const GeneratorSpec& gen, const LogTimeGrid& tgrid,
                            SquareIntegrand integrand = SquareIntegrand::Q);

/// ||G_L f||_p / ||f||_p for mean-zero f and 1 < p < infinity.
double g_function_ratio(const Field& f, const GeneratorSpec& gen, double p, const LogTimeGrid& tgrid,
                        SquareIntegrand integrand = SquareIntegrand::Q);

struct RatioBand {
  double lower;
  double upper;
};
/// Min and max of g_function_ratio over a family of fields.
RatioBand g_function_band(std::span<const Field> fields, const GeneratorSpec& gen, double p,
                          const LogTimeGrid& tgrid);

struct GapRow {
  double t;
  double factor;  // K
  double gap;     // ||P_t f - P_{Kt} f||_inf
  double ratio;   // gap / (t^((lambda-n)/(pm)) * seminorm)
};
struct WeightedTailRow {
  Index x;
  double t;
  double delta;
  double integral;
  double ratio;
};
struct GapDiagnostics {
  bool skipped = false;  // zero seminorm
  std::vector<GapRow> gaps;
  std::vector<WeightedTailRow> tails;
};

/// Decay diagnostics of the semigroup differences, normalized by the
/// semigroup seminorm (already computed and passed in).
GapDiagnostics semigroup_gap_diagnostics(const Field& f, const MorreyParams& params,
                                         const GeneratorSpec& gen, double semigroup_norm,
                                         std::span<const double> t_set,
                                         std::span<const double> factors,
                                         std::span<const Index> x_samples,
                                         std::span<const double> deltas);

/// Least-squares slope of log y against log x.
double loglog_slope(std::span<const double> x, std::span<const double> y);

}  // namespace morrey
