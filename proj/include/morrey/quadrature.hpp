#pragma once

#include <span>
#include <vector>

#include "morrey/grid.hpp"
#include "morrey/operators.hpp"

namespace morrey {

/// Midpoint rule in log t for integrals of the form int (.) dt/t.
///
/// [t_min, t_max] is split into K cells of equal logarithmic width
/// ln(t_max/t_min)/K; node j sits at the geometric center of cell j.
class LogTimeGrid {
 public:
  static constexpr int kMinNodes = 16;
  static constexpr int kDefaultNodes = 512;

  LogTimeGrid(double t_min, double t_max, int nodes);

  /// Span chosen from a symbol range so that t_min^m * a_max = 1e-3 and
  /// t_max^m * a_min = 40.
  static LogTimeGrid for_symbols(const SymbolRange& range, double m, int nodes = kDefaultNodes);
  static LogTimeGrid for_grid(const Grid& grid, const GeneratorSpec& gen, int nodes = kDefaultNodes);

  double t_min() const noexcept { return t_min_; }
  double t_max() const noexcept { return t_max_; }
  int size() const noexcept { return int(nodes_.size()); }
  std::span<const double> nodes() const noexcept { return nodes_; }
  std::span<const double> weights() const noexcept { return weights_; }
  double weight() const noexcept { return weights_.front(); }

 private:
  double t_min_;
  double t_max_;
  std::vector<double> nodes_;
  std::vector<double> weights_;
};

/// sum_j values_j w_j, accumulated in ascending j.
double integrate_dt_over_t(std::span<const double> values, const LogTimeGrid& grid);
cplx integrate_dt_over_t(std::span<const cplx> values, const LogTimeGrid& grid);

/// b_m = 36m/5, the normalization of the reproducing formula.
constexpr double calderon_constant(double m) noexcept { return 36.0 * m / 5.0; }

/// t^(2m) e^(-2t^m) (1 - e^(-t^m)), integrand of the normalization.
double calderon_integrand(double t, double m) noexcept;

struct CalderonConstantCheck {
  double integral;
  double expected;  // 5/(36m)
  double relative_error;
};
CalderonConstantCheck calderon_constant_check(double m, const LogTimeGrid& grid);

/// Per-frequency multiplier b_m sum_j (s_j a)^2 e^(-2 s_j a) (1 - e^(-s_j a)) w_j,
/// s_j = t_j^m. Equals one in the exact-integral limit for every a > 0.
double calderon_multiplier(double a, double m, const LogTimeGrid& grid) noexcept;

/// Span condition of the reproducing formula on a grid:
/// t_min^m a_max <= 0.1 and t_max^m a_min >= 20. Throws TruncationError
/// carrying the worst per-frequency multiplier defect when violated.
void check_reproduction_span(const Grid& grid, const GeneratorSpec& gen, const LogTimeGrid& tgrid);

/// b_m sum_j Q_{t_j^m}^2 (I - P_{t_j^m}) h w_j. Reproduces the mean-free part
/// of h; constants are annihilated.
Field calderon_reproduce(const GeneratorSpec& gen, const Field& h, const LogTimeGrid& tgrid);

}  // namespace morrey
