#include "morrey/quadrature.hpp"

#include <cmath>
#include <string>

#include "morrey/error.hpp"

namespace morrey {

LogTimeGrid::LogTimeGrid(double t_min, double t_max, int nodes) : t_min_(t_min), t_max_(t_max) {
  if (!(t_min > 0.0) || !std::isfinite(t_max) || !(t_max > t_min))
    throw ParameterError("log time grid needs 0 < t_min < t_max");
  if (nodes < kMinNodes)
    throw ParameterError("log time grid needs at least " + std::to_string(kMinNodes) + " nodes");
  const double span = std::log(t_max / t_min);
  const double w = span / nodes;
  nodes_.resize(nodes);
  weights_.assign(nodes, w);
  for (int j = 0; j < nodes; ++j) nodes_[j] = t_min * std::exp((j + 0.5) * w);
}

LogTimeGrid LogTimeGrid::for_symbols(const SymbolRange& range, double m, int nodes) {
  const double t_min = std::pow(1e-3 / range.max, 1.0 / m);
  const double t_max = std::pow(40.0 / range.min_nonzero, 1.0 / m);
  return LogTimeGrid(t_min, t_max, nodes);
}

LogTimeGrid LogTimeGrid::for_grid(const Grid& grid, const GeneratorSpec& gen, int nodes) {
  return for_symbols(symbol_range(grid, gen), gen.order(), nodes);
}

double integrate_dt_over_t(std::span<const double> values, const LogTimeGrid& grid) {
  if (values.size() != std::size_t(grid.size()))
    throw InputError("one value per quadrature node required");
  double s = 0.0;
  for (std::size_t j = 0; j < values.size(); ++j) s += values[j] * grid.weights()[j];
  return s;
}

cplx integrate_dt_over_t(std::span<const cplx> values, const LogTimeGrid& grid) {
  if (values.size() != std::size_t(grid.size()))
    throw InputError("one value per quadrature node required");
  cplx s = 0.0;
  for (std::size_t j = 0; j < values.size(); ++j) s += values[j] * grid.weights()[j];
  return s;
}

double calderon_integrand(double t, double m) noexcept {
  const double s = std::pow(t, m);
  return s * s * std::exp(-2.0 * s) * (-std::expm1(-s));
}

CalderonConstantCheck calderon_constant_check(double m, const LogTimeGrid& grid) {
  if (m != 1.0 && m != 2.0) throw ParameterError("calderon constant check needs m in {1, 2}");
  std::vector<double> v(grid.size());
  for (int j = 0; j < grid.size(); ++j) v[j] = calderon_integrand(grid.nodes()[j], m);
  const double integral = integrate_dt_over_t(v, grid);
  const double expected = 5.0 / (36.0 * m);
  return {integral, expected, std::fabs(integral - expected) / expected};
}

double calderon_multiplier(double a, double m, const LogTimeGrid& grid) noexcept {
  double s = 0.0;
  for (int j = 0; j < grid.size(); ++j) {
    const double z = std::pow(grid.nodes()[j], m) * a;
    s += z * z * std::exp(-2.0 * z) * (-std::expm1(-z)) * grid.weights()[j];
  }
  return calderon_constant(m) * s;
}

void check_reproduction_span(const Grid& grid, const GeneratorSpec& gen, const LogTimeGrid& tgrid) {
  const SymbolRange range = symbol_range(grid, gen);
  const double m = gen.order();
  const bool low_ok = std::pow(tgrid.t_min(), m) * range.max <= 0.1;
  const bool high_ok = std::pow(tgrid.t_max(), m) * range.min_nonzero >= 20.0;
  if (low_ok && high_ok) return;
  const double tail = std::max(std::fabs(1.0 - calderon_multiplier(range.max, m, tgrid)),
                               std::fabs(1.0 - calderon_multiplier(range.min_nonzero, m, tgrid)));
  throw TruncationError("time span [" + std::to_string(tgrid.t_min()) + ", " +
                            std::to_string(tgrid.t_max()) +
                            "] does not cover the grid's symbol range; estimated multiplier defect " +
                            std::to_string(tail),
                        tail);
}

Field calderon_reproduce(const GeneratorSpec& gen, const Field& h, const LogTimeGrid& tgrid) {
  check_reproduction_span(h.grid(), gen, tgrid);
  const auto a = symbol_table(h.grid(), gen);
  const double m = gen.order();
  // The node sum is linear, so it is carried out per frequency and
  // transformed back once.
  return apply_symbol_function(forward_transform(h), a, [&](double s) {
    return s == 0.0 ? 0.0 : calderon_multiplier(s, m, tgrid);
  });
}

}  // namespace morrey
