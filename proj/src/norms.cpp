#include "morrey/norms.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <optional>
#include <cmath>
#include <numeric>
#include <string>

#include "morrey/error.hpp"

namespace morrey {

void MorreyParams::validate(int dimension) const {
  if (!(p >= 1.0) || !std::isfinite(p)) throw ParameterError("Morrey exponent p must satisfy 1 <= p < inf");
  if (!(lambda > 0.0) || !(lambda < dimension))
    throw ParameterError("Morrey exponent lambda must lie in (0, n)");
}

std::string_view to_string(SeminormKind kind) noexcept {
  switch (kind) {
    case SeminormKind::Classical: return "classical";
    case SeminormKind::Semigroup: return "semigroup";
    case SeminormKind::Maximal: return "maximal";
    case SeminormKind::PoissonPointwise: return "poisson_pointwise";
    case SeminormKind::SquareFnPoisson: return "squarefn_poisson";
    case SeminormKind::SquareFnL: return "squarefn_l";
    case SeminormKind::CarlesonTent: return "carleson_tent";
  }
  return "unknown";
}

SeminormKind seminorm_kind_from_string(std::string_view name) {
  for (auto k : {SeminormKind::Classical, SeminormKind::Semigroup, SeminormKind::Maximal,
                 SeminormKind::PoissonPointwise, SeminormKind::SquareFnPoisson,
                 SeminormKind::SquareFnL, SeminormKind::CarlesonTent})
    if (to_string(k) == name) return k;
  throw ParameterError("unknown seminorm kind '" + std::string(name) + "'");
}

namespace {

/// Calls fn(flat) for every member of the stencil ball around center.
template <class Fn>
void for_each_member(const Grid& grid, const Index& center, const BallStencil& stencil, Fn&& fn) {
  const int N = grid.points_per_axis();
  auto wrap = [N](int i) {
    i %= N;
    return i < 0 ? i + N : i;
  };
  if (grid.dimension() == 1) {
    const int w = stencil.spans().front().half_width;
    for (int d = -w; d <= w; ++d) fn(std::size_t(wrap(center[0] + d)));
    return;
  }
  for (const auto& span : stencil.spans()) {
    const std::size_t row = std::size_t(wrap(center[0] + span.row_offset)) * N;
    for (int d = -span.half_width; d <= span.half_width; ++d) fn(row + std::size_t(wrap(center[1] + d)));
  }
}

/// values[r][c] for radius r and center c, assembled in table order
/// (center-major, radius-minor).
SeminormReport assemble(SeminormKind kind, std::span<const Index> centers, std::span<const double> scales,
                        const std::vector<std::vector<double>>& values) {
  SeminormReport rep;
  rep.kind = kind;
  rep.table.reserve(centers.size() * scales.size());
  bool first = true;
  for (std::size_t c = 0; c < centers.size(); ++c) {
    for (std::size_t r = 0; r < scales.size(); ++r) {
      SeminormSample s{centers[c], scales[r], values[r][c]};
      rep.table.push_back(s);
      if (first || s.value > rep.value) {
        rep.value = s.value;
        rep.witness = s;
        first = false;
      }
    }
  }
  return rep;
}

std::vector<double> abs_pow(const Field& f, double p) {
  std::vector<double> u(f.size());
  for (std::size_t i = 0; i < u.size(); ++i) u[i] = std::pow(std::abs(f[i]), p);
  return u;
}

Field real_field(const Grid& grid, std::span<const double> u) {
  return Field(grid, std::vector<cplx>(u.begin(), u.end()));
}

std::vector<double> ball_sums(const Grid& grid, std::span<const double> u, const BallStencil& stencil,
                              std::span<const Index> centers) {
  WindowSums<double> sums(grid, u);
  std::vector<double> out(centers.size());
  for (std::size_t c = 0; c < centers.size(); ++c) out[c] = sums.ball_sum(centers[c], stencil);
  return out;
}

std::size_t offset_index(const Grid& grid, const Index& x, const Index& d) {
  return grid.flatten(grid.wrap({x[0] - d[0], x[1] - d[1]}));
}

}  // namespace

// ---------------------------------------------------------------------------

SeminormReport classical_seminorm(const Field& f, const MorreyParams& params, const BallSet& balls,
                                  EvaluationMethod method) {
  const Grid& g = f.grid();
  require_same_grid(g, balls.grid());
  params.validate(g.dimension());
  const double p = params.p;
  const double hn = g.cell_volume();
  const bool windowed = method == EvaluationMethod::Windowed ||
                        (method == EvaluationMethod::Auto && p == 2.0);
  if (windowed && p != 2.0) throw ParameterError("windowed classical seminorm requires p = 2");

  std::vector<std::vector<double>> values(balls.radii().size());
  std::optional<WindowSums<cplx>> sum_f;
  std::optional<WindowSums<double>> sum_sq;
  if (windowed) {
    const Field centered = f - Field::constant(g, f.mean());
    sum_f.emplace(g, centered.samples());
    const auto sq = abs_pow(centered, 2.0);
    sum_sq.emplace(g, std::span<const double>(sq));
  }
  for (std::size_t r = 0; r < balls.radii().size(); ++r) {
    const double radius = balls.radii()[r];
    const BallStencil stencil(g, radius);
    const double count = double(stencil.count());
    const double norm = std::pow(radius, -params.lambda);
    auto& out = values[r];
    out.resize(balls.centers().size());
    for (std::size_t c = 0; c < balls.centers().size(); ++c) {
      const Index& center = balls.centers()[c];
      double dev;
      if (windowed) {
        const cplx s = sum_f->ball_sum(center, stencil);
        dev = std::max(0.0, sum_sq->ball_sum(center, stencil) - std::norm(s) / count);
      } else {
        cplx s = 0.0;
        for_each_member(g, center, stencil, [&](std::size_t i) { s += f[i]; });
        const cplx mean = s / count;
        dev = 0.0;
        for_each_member(g, center, stencil, [&](std::size_t i) { dev += std::pow(std::abs(f[i] - mean), p); });
      }
      out[c] = std::pow(norm * dev * hn, 1.0 / p);
    }
  }
  return assemble(SeminormKind::Classical, balls.centers(), balls.radii(), values);
}

SeminormReport semigroup_seminorm(const Field& f, const MorreyParams& params,
                                  const GeneratorSpec& gen, const BallSet& balls) {
  const Grid& g = f.grid();
  require_same_grid(g, balls.grid());
  params.validate(g.dimension());
  const SpectralField fhat = forward_transform(f);
  const auto a = symbol_table(g, gen);
  const double hn = g.cell_volume();

  std::vector<std::vector<double>> values(balls.radii().size());
  for (std::size_t r = 0; r < balls.radii().size(); ++r) {
    const double radius = balls.radii()[r];
    const double t = std::pow(radius, gen.order());
    // f - P_t f in one multiplier application: 1 - e^(-ta).
    const Field diff = apply_symbol_function(fhat, a, [t](double s) { return -std::expm1(-t * s); });
    const auto u = abs_pow(diff, params.p);
    const auto sums = ball_sums(g, u, BallStencil(g, radius), balls.centers());
    const double norm = std::pow(radius, -params.lambda);
    values[r].resize(sums.size());
    for (std::size_t c = 0; c < sums.size(); ++c) values[r][c] = std::pow(norm * sums[c] * hn, 1.0 / params.p);
  }
  return assemble(SeminormKind::Semigroup, balls.centers(), balls.radii(), values);
}

SeminormReport maximal_seminorm(const Field& f, const MorreyParams& params, const GeneratorSpec& gen,
                                std::span<const double> t_set, int x_stride) {
  const Grid& g = f.grid();
  params.validate(g.dimension());
  if (t_set.empty()) throw ParameterError("maximal seminorm needs a nonempty time set");
  const double m = gen.order();
  const double t_cap = std::pow(0.25 * g.domain_length(), m) * (1.0 + 1e-12);
  for (double t : t_set)
    if (!(t > 0.0) || t > t_cap) throw ParameterError("maximal seminorm times must lie in (0, (L/4)^m]");

  const auto centers = lattice_centers(g, x_stride);
  const SpectralField fhat = forward_transform(f);
  const auto a = symbol_table(g, gen);
  const double n = g.dimension();

  std::vector<std::vector<double>> values(t_set.size());
  for (std::size_t k = 0; k < t_set.size(); ++k) {
    const double t = t_set[k];
    const Field diff = apply_symbol_function(fhat, a, [t](double s) { return -std::expm1(-t * s); });
    const auto u = abs_pow(diff, params.p);
    const Field smoothed = apply_P(gen, t, real_field(g, u));
    const double weight = std::pow(t, (n - params.lambda) / (params.p * m));
    values[k].resize(centers.size());
    for (std::size_t c = 0; c < centers.size(); ++c) {
      const double v = std::max(0.0, smoothed[g.flatten(centers[c])].real());
      values[k][c] = weight * std::pow(v, 1.0 / params.p);
    }
  }
  return assemble(SeminormKind::Maximal, centers, t_set, values);
}

SeminormReport poisson_pointwise_seminorm(const Field& f, const MorreyParams& params,
                                          const GeneratorSpec& gen, std::span<const double> t_set,
                                          int x_stride) {
  if (gen.kind() != GeneratorKind::Poisson)
    throw ParameterError("pointwise characterization is defined for the Poisson semigroup only");
  const Grid& g = f.grid();
  params.validate(g.dimension());
  if (t_set.empty()) throw ParameterError("pointwise seminorm needs a nonempty time set");
  for (double t : t_set)
    if (!(t > 0.0)) throw ParameterError("pointwise seminorm times must be > 0");

  const auto centers = lattice_centers(g, x_stride);
  const double n = g.dimension();
  std::vector<std::vector<double>> values(t_set.size());
  for (std::size_t k = 0; k < t_set.size(); ++k) {
    const double t = t_set[k];
    const auto w = semigroup_weights(gen, t, g);
    const double weight = std::pow(t, n - params.lambda);
    values[k].resize(centers.size());
    for (std::size_t c = 0; c < centers.size(); ++c) {
      const Index& x = centers[c];
      cplx avg = 0.0;
      for (std::size_t d = 0; d < w.size(); ++d) avg += w[d] * f[offset_index(g, x, g.unflatten(d))];
      double acc = 0.0;
      for (std::size_t d = 0; d < w.size(); ++d)
        acc += w[d] * std::pow(std::abs(f[offset_index(g, x, g.unflatten(d))] - avg), params.p);
      values[k][c] = std::pow(weight * std::max(0.0, acc), 1.0 / params.p);
    }
  }
  return assemble(SeminormKind::PoissonPointwise, centers, t_set, values);
}

double variance_identity_discrepancy(const Field& f, const GeneratorSpec& gen,
                                     std::span<const PointTime> samples) {
  const Grid& g = f.grid();
  const auto sq = abs_pow(f, 2.0);
  const Field f_sq = real_field(g, sq);
  double worst = 0.0;
  double cached_t = -1.0;
  std::vector<double> w;
  std::optional<Field> pf, pf_sq;
  for (const PointTime& s : samples) {
    if (!(s.t > 0.0)) throw ParameterError("variance identity samples need t > 0");
    if (s.t != cached_t) {
      cached_t = s.t;
      w = semigroup_weights(gen, s.t, g);
      pf = apply_P(gen, s.t, f);
      pf_sq = apply_P(gen, s.t, f_sq);
    }
    const Index x = g.wrap(s.x);
    const cplx avg = (*pf)[g.flatten(x)];
    double lhs = 0.0;
    for (std::size_t d = 0; d < w.size(); ++d)
      lhs += w[d] * std::norm(f[offset_index(g, x, g.unflatten(d))] - avg);
    const double rhs = (*pf_sq)[g.flatten(x)].real() - std::norm(avg);
    worst = std::max(worst, std::fabs(lhs - rhs));
  }
  return worst;
}

// ---------------------------------------------------------------------------

namespace {

struct SquareSetup {
  std::vector<double> symbols;
  std::function<double(double a, double t)> multiplier;
  double truncation_estimate;
};

SquareSetup square_setup(const Grid& g, const GeneratorSpec& gen, const LogTimeGrid& tgrid,
                         SquareVariant variant) {
  SquareSetup s;
  if (variant == SquareVariant::SquareFnL) {
    const double m = gen.order();
    s.symbols = symbol_table(g, gen);
    s.multiplier = [m](double a, double t) {
      const double z = std::pow(t, m) * a;
      return z * std::exp(-z) * (-std::expm1(-z));
    };
    // int_0^eps z (1-e^-z)^2 e^-2z dz ~ eps^4/4 against the full 13/144.
    const double eps = std::pow(tgrid.t_min(), m) * symbol_range(g, gen).max;
    s.truncation_estimate = std::min(1.0, std::pow(eps, 4) / 4.0 / (13.0 / 144.0));
  } else {
    const GeneratorSpec poisson = GeneratorSpec::poisson();
    s.symbols = symbol_table(g, poisson);
    s.multiplier = [](double a, double t) { return -t * a * std::exp(-t * a); };
    const double eps = tgrid.t_min() * symbol_range(g, poisson).max;
    s.truncation_estimate = std::min(1.0, 2.0 * eps * eps);
  }
  return s;
}

/// Sorted radius order and, for each sorted radius, the number of nodes with
/// t_j <= r.
struct RadiusCuts {
  std::vector<std::size_t> order;
  std::vector<int> node_count;
};

RadiusCuts radius_cuts(std::span<const double> radii, const LogTimeGrid& tgrid) {
  RadiusCuts cuts;
  cuts.order.resize(radii.size());
  std::iota(cuts.order.begin(), cuts.order.end(), std::size_t{0});
  std::stable_sort(cuts.order.begin(), cuts.order.end(),
                   [&](std::size_t a, std::size_t b) { return radii[a] < radii[b]; });
  for (std::size_t i : cuts.order) {
    int count = 0;
    while (count < tgrid.size() && tgrid.nodes()[count] <= radii[i] * (1.0 + 1e-12)) ++count;
    cuts.node_count.push_back(count);
  }
  return cuts;
}

}  // namespace

SeminormReport square_function_seminorm(const Field& f, const MorreyParams& params,
                                        const GeneratorSpec& gen, const BallSet& balls,
                                        const LogTimeGrid& tgrid, SquareVariant variant) {
  const Grid& g = f.grid();
  require_same_grid(g, balls.grid());
  params.validate(g.dimension());
  const SquareSetup setup = square_setup(g, gen, tgrid, variant);
  const SpectralField fhat = forward_transform(f);
  const RadiusCuts cuts = radius_cuts(balls.radii(), tgrid);
  const double hn = g.cell_volume();

  std::vector<double> aggregate(g.size(), 0.0);
  std::vector<std::vector<double>> values(balls.radii().size());
  int node = 0;
  for (std::size_t k = 0; k < cuts.order.size(); ++k) {
    for (; node < cuts.node_count[k]; ++node) {
      const double t = tgrid.nodes()[node];
      const double w = tgrid.weights()[node];
      const Field At = apply_symbol_function(fhat, setup.symbols,
                                             [&](double a) { return setup.multiplier(a, t); });
      for (std::size_t i = 0; i < aggregate.size(); ++i) aggregate[i] += std::norm(At[i]) * w;
    }
    const std::size_t r = cuts.order[k];
    const double radius = balls.radii()[r];
    std::vector<double> u(aggregate.size());
    for (std::size_t i = 0; i < u.size(); ++i) u[i] = std::pow(aggregate[i], 0.5 * params.p);
    const auto sums = ball_sums(g, u, BallStencil(g, radius), balls.centers());
    const double norm = std::pow(radius, -params.lambda);
    values[r].resize(sums.size());
    for (std::size_t c = 0; c < sums.size(); ++c) values[r][c] = std::pow(norm * sums[c] * hn, 1.0 / params.p);
  }
  auto rep = assemble(variant == SquareVariant::SquareFnL ? SeminormKind::SquareFnL
                                                          : SeminormKind::SquareFnPoisson,
                      balls.centers(), balls.radii(), values);
  rep.truncation_estimate = setup.truncation_estimate;
  return rep;
}

SeminormReport carleson_tent_norm(const Field& f, const MorreyParams& params,
                                  const GeneratorSpec& gen, const BallSet& balls,
                                  const LogTimeGrid& tgrid) {
  const Grid& g = f.grid();
  require_same_grid(g, balls.grid());
  params.validate(g.dimension());
  if (params.p != 2.0) throw ParameterError("the tent (Carleson) norm is defined for p = 2");
  const SquareSetup setup = square_setup(g, gen, tgrid, SquareVariant::SquareFnL);
  const SpectralField fhat = forward_transform(f);
  const RadiusCuts cuts = radius_cuts(balls.radii(), tgrid);
  const double hn = g.cell_volume();

  // Tent mass accumulated layer by layer: the nodes between consecutive radii
  // form one time slab whose ball sums are added to every larger tent.
  std::vector<std::vector<double>> stencil_mass(balls.radii().size(),
                                                std::vector<double>(balls.centers().size(), 0.0));
  std::vector<BallStencil> stencils;
  for (double r : balls.radii()) stencils.emplace_back(g, r);

  int node = 0;
  for (std::size_t k = 0; k < cuts.order.size(); ++k) {
    std::vector<double> slab(g.size(), 0.0);
    for (; node < cuts.node_count[k]; ++node) {
      const double t = tgrid.nodes()[node];
      const double w = tgrid.weights()[node];
      const Field At = apply_symbol_function(fhat, setup.symbols,
                                             [&](double a) { return setup.multiplier(a, t); });
      for (std::size_t i = 0; i < slab.size(); ++i) slab[i] += std::norm(At[i]) * w;
    }
    WindowSums<double> sums(g, std::span<const double>(slab));
    for (std::size_t kk = k; kk < cuts.order.size(); ++kk) {
      const std::size_t r = cuts.order[kk];
      for (std::size_t c = 0; c < balls.centers().size(); ++c)
        stencil_mass[r][c] += sums.ball_sum(balls.centers()[c], stencils[r]) * hn;
    }
  }
  std::vector<std::vector<double>> values(balls.radii().size());
  for (std::size_t r = 0; r < balls.radii().size(); ++r) {
    const double norm = std::pow(balls.radii()[r], -params.lambda);
    values[r].resize(balls.centers().size());
    for (std::size_t c = 0; c < values[r].size(); ++c) values[r][c] = std::sqrt(stencil_mass[r][c] * norm);
  }
  auto rep = assemble(SeminormKind::CarlesonTent, balls.centers(), balls.radii(), values);
  rep.truncation_estimate = setup.truncation_estimate;
  return rep;
}

// ---------------------------------------------------------------------------

Field square_function_field(const Field& f, const GeneratorSpec& gen, const LogTimeGrid& tgrid,
                            SquareIntegrand integrand) {
  const Grid& g = f.grid();
  const SpectralField fhat = forward_transform(f);
  const auto a = symbol_table(g, gen);
  std::vector<double> aggregate(g.size(), 0.0);
  for (int j = 0; j < tgrid.size(); ++j) {
    const double t = tgrid.nodes()[j];
    const Field At = apply_symbol_function(fhat, a, [&](double s) {
      const double z = t * s;
      const double q = z * std::exp(-z);
      return integrand == SquareIntegrand::Q ? q : q * (-std::expm1(-z));
    });
    for (std::size_t i = 0; i < aggregate.size(); ++i) aggregate[i] += std::norm(At[i]) * tgrid.weights()[j];
  }
  std::vector<cplx> out(g.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::sqrt(aggregate[i]);
  return Field(g, std::move(out));
}

double g_function_ratio(const Field& f, const GeneratorSpec& gen, double p, const LogTimeGrid& tgrid,
                        SquareIntegrand integrand) {
  if (!(p > 1.0) || !std::isfinite(p)) throw ParameterError("square function ratio needs 1 < p < inf");
  const double fp = lp_norm(f, p);
  if (fp == 0.0) throw InputError("square function ratio undefined for the zero field");
  double l1 = 0.0;
  for (const cplx& v : f.samples()) l1 += std::abs(v);
  cplx sum = 0.0;
  for (const cplx& v : f.samples()) sum += v;
  if (std::abs(sum) > 1e-10 * l1) throw InputError("square function ratio needs a mean-zero field");
  return lp_norm(square_function_field(f, gen, tgrid, integrand), p) / fp;
}

RatioBand g_function_band(std::span<const Field> fields, const GeneratorSpec& gen, double p,
                          const LogTimeGrid& tgrid) {
  if (fields.empty()) throw ParameterError("ratio band needs at least one field");
  RatioBand band{std::numeric_limits<double>::infinity(), 0.0};
  for (const Field& f : fields) {
    const double r = g_function_ratio(f, gen, p, tgrid);
    band.lower = std::min(band.lower, r);
    band.upper = std::max(band.upper, r);
  }
  return band;
}

// ---------------------------------------------------------------------------

GapDiagnostics semigroup_gap_diagnostics(const Field& f, const MorreyParams& params,
                                         const GeneratorSpec& gen, double semigroup_norm,
                                         std::span<const double> t_set,
                                         std::span<const double> factors,
                                         std::span<const Index> x_samples,
                                         std::span<const double> deltas) {
  const Grid& g = f.grid();
  params.validate(g.dimension());
  GapDiagnostics out;
  if (!(semigroup_norm > 0.0)) {
    out.skipped = true;
    return out;
  }
  const double n = g.dimension();
  const double m = gen.order();
  const double exponent = (params.lambda - n) / (params.p * m);
  const SpectralField fhat = forward_transform(f);
  const auto a = symbol_table(g, gen);

  for (double t : t_set) {
    if (!(t > 0.0)) throw ParameterError("gap diagnostics need t > 0");
    const double scale = std::pow(t, exponent) * semigroup_norm;
    for (double K : factors) {
      if (!(K > 1.0)) throw ParameterError("gap factor K must exceed 1");
      const Field diff = apply_symbol_function(
          fhat, a, [&](double s) { return std::exp(-t * s) - std::exp(-K * t * s); });
      const double gap = diff.max_abs();
      out.gaps.push_back({t, K, gap, gap / scale});
    }
    if (x_samples.empty() || deltas.empty()) continue;
    const Field resid = apply_symbol_function(fhat, a, [t](double s) { return -std::expm1(-t * s); });
    const double tau = std::pow(t, 1.0 / m);
    for (const Index& x : x_samples) {
      for (double delta : deltas) {
        if (!(delta > 0.0)) throw ParameterError("weighted tail needs delta > 0");
        double integral = 0.0;
        for (std::size_t y = 0; y < g.size(); ++y) {
          const double d = g.periodic_distance(g.wrap(x), g.unflatten(y));
          integral += std::pow(t, delta / m) / std::pow(tau + d, n + delta) * std::abs(resid[y]);
        }
        integral *= g.cell_volume();
        out.tails.push_back({g.wrap(x), t, delta, integral, integral / scale});
      }
    }
  }
  return out;
}

double loglog_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw ParameterError("slope fit needs >= 2 matching samples");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double k = double(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (k * sxy - sx * sy) / (k * sxx - sx * sx);
}

}  // namespace morrey
