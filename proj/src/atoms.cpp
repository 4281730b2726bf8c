#include "morrey/atoms.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "morrey/error.hpp"

namespace morrey {

namespace {

double ball_lq(std::span<const cplx> samples, const Ball& ball, double q, double hn) {
  double s = 0.0;
  for (std::size_t i : ball.members) s += std::pow(std::abs(samples[i]), q);
  return std::pow(s * hn, 1.0 / q);
}

void validate_exponents(double q, double lambda, int n) {
  if (!(q > 1.0) || !std::isfinite(q)) throw ParameterError("atom exponent q must satisfy 1 < q < inf");
  if (!(lambda > 0.0) || !(lambda < n)) throw ParameterError("atom lambda must lie in (0, n)");
}

}  // namespace

Atom make_atom(const Field& profile, const Ball& ball, double q, double lambda) {
  const Grid& g = profile.grid();
  validate_exponents(q, lambda, g.dimension());
  if (ball.members.empty()) throw ParameterError("atom ball has no grid points");
  cplx mean = 0.0;
  double scale = 0.0;
  for (std::size_t i : ball.members) {
    mean += profile[i];
    scale = std::max(scale, std::abs(profile[i]));
  }
  mean /= double(ball.members.size());

  std::vector<cplx> a(g.size(), 0.0);
  double spread = 0.0;
  for (std::size_t i : ball.members) {
    a[i] = profile[i] - mean;
    spread = std::max(spread, std::abs(a[i]));
  }
  if (spread <= 1e-12 * std::max(1.0, scale)) throw DegenerateAtom("profile is constant on the ball");

  const double p = q / (q - 1.0);
  const double target = std::pow(ball.radius, -lambda / p);
  const double factor = target / ball_lq(a, ball, q, g.cell_volume());
  for (std::size_t i : ball.members) a[i] *= factor;
  return Atom{Field(g, std::move(a)), ball, q, lambda};
}

AtomCheck check_atom(const Atom& atom) {
  const Grid& g = atom.field.grid();
  const auto s = atom.field.samples();
  AtomCheck c;
  c.support_ok = true;
  std::size_t next = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (next < atom.ball.members.size() && atom.ball.members[next] == i) {
      ++next;
      continue;
    }
    if (s[i] != 0.0) c.support_ok = false;
  }
  cplx sum = 0.0;
  double l1 = 0.0;
  for (const cplx& v : s) {
    sum += v;
    l1 += std::abs(v);
  }
  c.cancellation = l1 > 0.0 ? std::abs(sum) / l1 : 0.0;
  c.cancellation_ok = c.cancellation <= 1e-12;
  c.size_ratio = lp_norm(atom.field, atom.q) * std::pow(atom.ball.radius, atom.lambda / atom.p());
  c.size_ok = c.size_ratio <= 1.0 + 1e-12;
  (void)g;
  return c;
}

cplx pair(const Field& f, const Field& g) {
  require_same_grid(f.grid(), g.grid());
  cplx s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) s += f[i] * g[i];
  return s * f.grid().cell_volume();
}

double holder_bound(const Field& f, const Atom& atom) {
  require_same_grid(f.grid(), atom.field.grid());
  const double hn = f.grid().cell_volume();
  return ball_lq(f.samples(), atom.ball, atom.p(), hn) *
         ball_lq(atom.field.samples(), atom.ball, atom.q, hn);
}

namespace {

/// Calls fn(F_j, G_j, w_j) for each node, where F_j = Q_s(I - P_s) f and
/// G_j = Q_s(I - P_{r^m}) g.
template <class Fn>
void for_each_node_pair(const Field& f, const Field& g, double radius, const GeneratorSpec& gen,
                        const LogTimeGrid& tgrid, Fn&& fn) {
  require_same_grid(f.grid(), g.grid());
  check_reproduction_span(f.grid(), gen, tgrid);
  const double m = gen.order();
  const double tb = std::pow(radius, m);
  const auto a = symbol_table(f.grid(), gen);
  const SpectralField fhat = forward_transform(f);
  const SpectralField ghat = forward_transform(g);
  for (int j = 0; j < tgrid.size(); ++j) {
    const double s = std::pow(tgrid.nodes()[j], m);
    const Field Fj = apply_symbol_function(fhat, a, [s](double x) {
      const double z = s * x;
      return z * std::exp(-z) * (-std::expm1(-z));
    });
    const Field Gj = apply_symbol_function(ghat, a, [s, tb](double x) {
      const double z = s * x;
      return z * std::exp(-z) * (-std::expm1(-tb * x));
    });
    fn(Fj, Gj, tgrid.weights()[j]);
  }
}

}  // namespace

DualIdentity dual_identity_check(const Field& f, const Field& g, const Ball& ball,
                                 const GeneratorSpec& gen, const LogTimeGrid& tgrid) {
  const double m = gen.order();
  cplx rhs = 0.0;
  for_each_node_pair(f, g, ball.radius, gen, tgrid,
                     [&](const Field& F, const Field& G, double w) { rhs += pair(F, G) * w; });
  rhs *= calderon_constant(m);
  const Field residual = g - apply_P(gen, std::pow(ball.radius, m), g);
  const cplx lhs = pair(f, residual);
  return {lhs, rhs, std::abs(lhs - rhs), tgrid.size(), tgrid.t_min(), tgrid.t_max()};
}

PairingMass pairing_mass(const Field& f, const Atom& g, const GeneratorSpec& gen,
                         const LogTimeGrid& tgrid) {
  const double hn = f.grid().cell_volume();
  double mass = 0.0;
  for_each_node_pair(f, g.field, g.ball.radius, gen, tgrid, [&](const Field& F, const Field& G, double w) {
    double s = 0.0;
    for (std::size_t i = 0; i < F.size(); ++i) s += std::abs(F[i] * G[i]);
    mass += s * hn * w;
  });
  mass *= calderon_constant(gen.order());
  const double denom = std::pow(g.ball.radius, g.lambda / g.p()) * lp_norm(g.field, g.q);
  return {mass, mass / denom};
}

std::vector<Atom> atom_family(const Field& f, const BallSet& balls, double q, double lambda) {
  const Grid& g = f.grid();
  require_same_grid(g, balls.grid());
  validate_exponents(q, lambda, g.dimension());
  const double p = q / (q - 1.0);
  const double L = g.domain_length();
  std::vector<Atom> family;
  for (const Ball& ball : balls.materialize()) {
    const cplx mean = ball_mean(f, ball);
    std::vector<cplx> extremal(g.size(), 0.0);
    for (std::size_t i : ball.members) {
      const cplx d = f[i] - mean;
      const double mag = std::abs(d);
      extremal[i] = mag == 0.0 ? cplx(0.0) : std::conj(d) * std::pow(mag, p - 2.0);
    }
    const double c1 = g.point(ball.center)[0];
    std::vector<cplx> wave(g.size(), 0.0);
    for (std::size_t i : ball.members) {
      double dx = g.point(i)[0] - c1;
      dx -= L * std::round(dx / L);
      wave[i] = std::sin(std::numbers::pi * dx / ball.radius);
    }
    for (auto* profile : {&extremal, &wave}) {
      try {
        family.push_back(make_atom(Field(g, std::move(*profile)), ball, q, lambda));
      } catch (const DegenerateAtom&) {
      }
    }
  }
  return family;
}

double atomic_lower_bound(const Field& f, std::span<const Atom> family) {
  double best = 0.0;
  for (const Atom& a : family) best = std::max(best, std::abs(pair(f, a.field)));
  return best;
}

}  // namespace morrey
