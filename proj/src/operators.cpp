#include "morrey/operators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "morrey/error.hpp"

namespace morrey {

GeneratorSpec GeneratorSpec::from_name(std::string_view name) {
  if (name == "heat") return heat();
  if (name == "poisson") return poisson();
  throw ParameterError("unknown generator '" + std::string(name) + "' (expected heat|poisson)");
}

std::vector<double> symbol_table(const Grid& grid, const GeneratorSpec& gen) {
  std::vector<double> a(grid.size());
  for (std::size_t k = 0; k < a.size(); ++k) a[k] = gen.symbol(grid.frequency_magnitude(k));
  return a;
}

SymbolRange symbol_range(const Grid& grid, const GeneratorSpec& gen) {
  const double nyquist = grid.fundamental_frequency() * (grid.points_per_axis() / 2) *
                         std::sqrt(double(grid.dimension()));
  return {gen.symbol(grid.fundamental_frequency()), gen.symbol(nyquist)};
}

Field apply_symbol_function(const SpectralField& coefficients, std::span<const double> symbols,
                            const std::function<double(double)>& phi) {
  std::vector<double> mult(symbols.size());
  for (std::size_t k = 0; k < mult.size(); ++k) mult[k] = phi(symbols[k]);
  return inverse_transform(coefficients.multiplied(mult));
}

Field apply_P(const GeneratorSpec& gen, double t, const Field& f) {
  if (t < 0.0 || !std::isfinite(t)) throw ParameterError("semigroup time must be >= 0");
  if (t == 0.0) return f;
  const auto a = symbol_table(f.grid(), gen);
  return apply_symbol_function(forward_transform(f), a, [t](double s) { return std::exp(-t * s); });
}

Field apply_Q(const GeneratorSpec& gen, double t, const Field& f) {
  if (!(t > 0.0) || !std::isfinite(t)) throw ParameterError("Q_t needs t > 0");
  const auto a = symbol_table(f.grid(), gen);
  return apply_symbol_function(forward_transform(f), a,
                               [t](double s) { return t * s * std::exp(-t * s); });
}

std::vector<double> semigroup_weights(const GeneratorSpec& gen, double t, const Grid& grid) {
  if (t < 0.0) throw ParameterError("semigroup time must be >= 0");
  const auto a = symbol_table(grid, gen);
  std::vector<cplx> c(grid.size());
  const double scale = 1.0 / double(grid.size());
  for (std::size_t k = 0; k < c.size(); ++k) c[k] = std::exp(-t * a[k]) * scale;
  const Field w = inverse_transform(SpectralField(grid, std::move(c)));
  // The symbol is even, so the weights are real; flat slot d holds offset d.
  std::vector<double> out(grid.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = w[i].real();
  return out;
}

// ---------------------------------------------------------------------------

double poisson_constant(int dimension) {
  const double k = 0.5 * (dimension + 1);
  return std::tgamma(k) / std::pow(std::numbers::pi, k);
}

namespace {

double golden_max(const std::function<double(double)>& fn, double lo, double hi) {
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = lo, b = hi;
  double c = b - phi * (b - a), d = a + phi * (b - a);
  double fc = fn(c), fd = fn(d);
  for (int it = 0; it < 200 && (b - a) > 1e-14 * (1.0 + std::fabs(b)); ++it) {
    if (fc > fd) {
      b = d; d = c; fd = fc;
      c = b - phi * (b - a); fc = fn(c);
    } else {
      a = c; c = d; fc = fd;
      d = a + phi * (b - a); fd = fn(d);
    }
  }
  return std::max({fc, fd, fn(lo), fn(hi)});
}

/// sup over s >= 0 of fn(s), by dense log sampling on [1e-6, 1e4] plus a
/// golden-section refinement around the best sample.
double radial_sup(const std::function<double(double)>& fn) {
  constexpr int samples = 20000;
  std::vector<double> s(samples + 1);
  s[0] = 0.0;
  for (int i = 1; i <= samples; ++i) s[i] = 1e-6 * std::pow(1e10, double(i - 1) / (samples - 1));
  int best = 0;
  double best_val = fn(0.0);
  for (int i = 1; i <= samples; ++i) {
    const double v = fn(s[i]);
    if (v > best_val) {
      best_val = v;
      best = i;
    }
  }
  const double lo = s[std::max(best - 1, 0)];
  const double hi = s[std::min(best + 1, samples)];
  return std::max(best_val, golden_max(fn, lo, hi));
}

}  // namespace

KernelProfile::KernelProfile(GeneratorKind kind, int dimension) : kind_(kind), n_(dimension) {
  if (n_ != 1 && n_ != 2) throw ParameterError("kernel profile dimension must be 1 or 2");
  norm_ = kind_ == GeneratorKind::Heat ? std::pow(4.0 * std::numbers::pi, -0.5 * n_)
                                       : poisson_constant(n_);
  const double beta = decay_beta();
  const double e_decay = n_ + beta;
  const double e_grad = n_ + beta + holder_gamma();

  double grad_sup = 0.0;
  if (kind_ == GeneratorKind::Heat) {
    const double s_star = 0.5 * (-1.0 + std::sqrt(1.0 + 8.0 * e_decay));
    decay_constant_ = norm_ * std::exp(-0.25 * s_star * s_star) * std::pow(1.0 + s_star, e_decay);
    grad_sup = radial_sup([&](double s) {
      return norm_ * 0.5 * s * std::exp(-0.25 * s * s) * std::pow(1.0 + s, e_grad);
    });
  } else {
    // ((1+s)^2 / (1+s^2))^((n+1)/2) peaks at s = 1.
    decay_constant_ = norm_ * std::pow(2.0, 0.5 * (n_ + 1));
    grad_sup = radial_sup([&](double s) {
      return norm_ * (n_ + 1) * s * std::pow(1.0 + s * s, -0.5 * (n_ + 3)) *
             std::pow(1.0 + s, e_grad);
    });
    grad_sup = std::max(grad_sup, norm_ * (n_ + 1));  // limit s -> infinity
  }
  // Mean value theorem on the segment [x, x+h]: t^(1/m) + |w| >= (t^(1/m) + |x|)/2,
  // two difference terms.
  holder_constant_ = 2.0 * std::pow(2.0, e_grad) * grad_sup;
}

double KernelProfile::kernel(double t, double r) const noexcept {
  if (kind_ == GeneratorKind::Heat) return norm_ * std::pow(t, -0.5 * n_) * std::exp(-r * r / (4.0 * t));
  return norm_ * t * std::pow(t * t + r * r, -0.5 * (n_ + 1));
}

double KernelProfile::time_derivative(double t, double r) const noexcept {
  if (kind_ == GeneratorKind::Heat) return kernel(t, r) * (-0.5 * n_ + r * r / (4.0 * t));
  return norm_ * t * (r * r - n_ * t * t) * std::pow(t * t + r * r, -0.5 * (n_ + 3));
}

double KernelProfile::gradient_magnitude(double t, double r) const noexcept {
  if (kind_ == GeneratorKind::Heat) return kernel(t, r) * r / (2.0 * t);
  return norm_ * (n_ + 1) * t * r * std::pow(t * t + r * r, -0.5 * (n_ + 3));
}

double KernelProfile::envelope(double s) const noexcept {
  if (kind_ == GeneratorKind::Heat) return norm_ * std::exp(-0.25 * s * s);
  return norm_ * std::pow(1.0 + s * s, -0.5 * (n_ + 1));
}

double KernelProfile::derivative_envelope(double s) const noexcept {
  if (kind_ == GeneratorKind::Heat) return norm_ * std::exp(-0.125 * s * s);
  return envelope(s);
}

double KernelProfile::derivative_constant() const noexcept {
  if (kind_ == GeneratorKind::Heat)
    // |u - n/2| e^(-u/2) with u = s^2/4: max of n/2 (u = 0) and 2 e^(-1-n/4) (u = n/2 + 2).
    return std::max(0.5 * n_, 2.0 * std::exp(-1.0 - 0.25 * n_));
  // |s^2 - n| / (1 + s^2) <= max(n, 1).
  return std::max(double(n_), 1.0);
}

double KernelProfile::epsilon_sup() const noexcept {
  return kind_ == GeneratorKind::Heat ? std::numeric_limits<double>::infinity() : 1.0;
}

double KernelProfile::epsilon_zero() const noexcept {
  return 0.5 * std::min(order(), std::min(epsilon_sup(), 1.0));
}

double kernel_eval(const KernelProfile& profile, double t, const Point& x) {
  double r2 = 0.0;
  for (int axis = 0; axis < profile.dimension(); ++axis) r2 += x[axis] * x[axis];
  return profile.kernel(t, std::sqrt(r2));
}

// ---------------------------------------------------------------------------

PeriodizedKernel periodized_kernel(const KernelProfile& profile, double t, const Grid& grid) {
  if (!(t > 0.0)) throw ParameterError("kernel time must be > 0");
  if (profile.dimension() != grid.dimension())
    throw GridMismatch("kernel profile and grid dimensions differ");
  const int n = grid.dimension();
  const double L = grid.domain_length();
  PeriodizedKernel out;
  out.values.resize(grid.size());

  // Offsets are represented by the minimum image in [-L/2, L/2).
  auto offset = [&](std::size_t flat) {
    Index idx = grid.unflatten(flat);
    Point p{0.0, 0.0};
    for (int axis = 0; axis < n; ++axis) {
      int d = idx[axis] > grid.points_per_axis() / 2 ? idx[axis] - grid.points_per_axis() : idx[axis];
      p[axis] = d * grid.spacing();
    }
    return p;
  };

  if (profile.kind() == GeneratorKind::Poisson && n == 1) {
    // Exact lattice sum of c_1 t / (t^2 + (x + jL)^2).
    const double a = 2.0 * std::numbers::pi * t / L;
    for (std::size_t i = 0; i < out.values.size(); ++i) {
      const double theta = 2.0 * std::numbers::pi * offset(i)[0] / L;
      const double sa = std::sinh(0.5 * a), st = std::sin(0.5 * theta);
      out.values[i] = std::sinh(a) / (L * 2.0 * (sa * sa + st * st));
    }
    out.tail_estimate = 0.0;
    return out;
  }

  // Direct lattice sum over shifts with |j|_inf <= J.
  int J = 1;
  auto shell_tail = [&](int from) {
    double tail = 0.0;
    for (int j = from; j < from + 4000; ++j) {
      const double count = n == 1 ? 2.0 : 8.0 * j;
      const double term = count * profile.kernel(t, (j - 0.5) * L);
      tail += term;
      if (term < 1e-300 || term < 1e-20 * tail) break;
    }
    return tail;
  };
  if (profile.kind() == GeneratorKind::Heat) {
    while (J < 64 && shell_tail(J + 1) > 1e-17) ++J;
    out.tail_estimate = shell_tail(J + 1);
  } else {
    J = 8;
    // Kernel mass beyond radius R spread over one period cell.
    const double R = (J + 0.5) * L;
    out.tail_estimate = t / (L * L * std::sqrt(t * t + R * R));
  }

  const int jy = n == 2 ? J : 0;
  for (std::size_t i = 0; i < out.values.size(); ++i) {
    const Point base = offset(i);
    double s = 0.0;
    for (int jx = -J; jx <= J; ++jx)
      for (int jj = -jy; jj <= jy; ++jj)
        s += kernel_eval(profile, t, {base[0] + jx * L, base[1] + jj * L});
    out.values[i] = s;
  }
  return out;
}

double cross_validate_kernel(const GeneratorSpec& gen, const KernelProfile& profile, double t,
                             const Field& f) {
  if (gen.kind() != profile.kind()) throw ParameterError("generator and kernel profile differ");
  const Grid& g = f.grid();
  const PeriodizedKernel kernel = periodized_kernel(profile, t, g);
  if (kernel.tail_estimate >= kPeriodizationTailLimit)
    throw TruncationError("periodized kernel truncation error " + std::to_string(kernel.tail_estimate) +
                              " exceeds " + std::to_string(kPeriodizationTailLimit) +
                              "; the multiplier path is the only reference at this t",
                          kernel.tail_estimate);

  const Field reference = apply_P(gen, t, f);
  const double hn = g.cell_volume();
  double worst = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const Index xi = g.unflatten(i);
    cplx s = 0.0;
    for (std::size_t j = 0; j < g.size(); ++j) {
      const Index yj = g.unflatten(j);
      const Index d = g.wrap({xi[0] - yj[0], xi[1] - yj[1]});
      s += kernel.values[g.flatten(d)] * f[j];
    }
    worst = std::max(worst, std::abs(s * hn - reference[i]));
  }
  return worst;
}

// ---------------------------------------------------------------------------

std::size_t KernelBoundReport::total_violations() const noexcept {
  std::size_t v = 0;
  for (const auto& r : records) v += r.violations;
  return v;
}

namespace {

double norm_of(const Point& p, int n) {
  double s = 0.0;
  for (int axis = 0; axis < n; ++axis) s += p[axis] * p[axis];
  return std::sqrt(s);
}

class BoundAccumulator {
 public:
  BoundAccumulator(std::string id, double recorded) {
    rec_.bound_id = std::move(id);
    rec_.recorded_constant = recorded;
  }
  void add(double lhs, double rhs_unit, std::vector<double> sample) {
    ++rec_.samples;
    const double ratio = lhs == 0.0 ? 0.0 : lhs / rhs_unit;
    if (ratio > rec_.worst_constant || rec_.worst_sample.empty()) {
      rec_.worst_constant = std::max(rec_.worst_constant, ratio);
      rec_.worst_sample = std::move(sample);
    }
    const double c = rec_.recorded_constant;
    const double slack = 1e-9 * c * std::max(rhs_unit, std::numeric_limits<double>::min());
    if (!(lhs <= c * rhs_unit + slack)) ++rec_.violations;
  }
  BoundRecord take() { return std::move(rec_); }

 private:
  BoundRecord rec_;
};

}  // namespace

KernelBoundReport verify_kernel_bounds(const KernelProfile& profile, std::span<const double> t_set,
                                       std::span<const Point> x_set, std::span<const Point> h_set) {
  const int n = profile.dimension();
  const double m = profile.order();
  const double beta = profile.decay_beta();

  BoundAccumulator upper("upper_bound", profile.envelope_constant());
  BoundAccumulator deriv("time_derivative", profile.derivative_constant());
  BoundAccumulator qker("q_kernel", profile.derivative_constant());
  BoundAccumulator decay("polynomial_decay", profile.decay_constant());
  BoundAccumulator holder("holder", profile.holder_constant());
  BoundAccumulator mono("radial_monotone", 1.0);

  for (double t : t_set) {
    if (!(t > 0.0)) throw ParameterError("kernel bound samples need t > 0");
    const double tau = std::pow(t, 1.0 / m);
    const double scale = std::pow(t, -double(n) / m);
    for (const Point& x : x_set) {
      const double r = norm_of(x, n);
      const double s = r / tau;
      std::vector<double> sample{t, x[0]};
      if (n == 2) sample.push_back(x[1]);

      const double p = profile.kernel(t, r);
      upper.add(p, scale * profile.envelope(s), sample);
      deriv.add(std::fabs(profile.time_derivative(t, r)), scale * profile.derivative_envelope(s), sample);
      // q_{t^m}(x) = -(t^m) d/ds p_s(x) at s = t^m.
      const double tm = std::pow(t, m);
      qker.add(std::fabs(profile.time_derivative(tm, r)),
               std::pow(t, -double(n)) * profile.derivative_envelope(r / t), sample);
      decay.add(p, std::pow(t, beta / m) / std::pow(tau + r, n + beta), sample);
      mono.add(p, profile.kernel(t, 0.0), sample);

      for (const Point& h : h_set) {
        const double hn = norm_of(h, n);
        if (!(hn > 0.0) || 2.0 * hn > tau + r) continue;
        const Point plus{x[0] + h[0], x[1] + h[1]};
        const Point minus{x[0] - h[0], x[1] - h[1]};
        const double diff = std::fabs(kernel_eval(profile, t, plus) - p) +
                            std::fabs(kernel_eval(profile, t, minus) - p);
        std::vector<double> hs = sample;
        hs.push_back(h[0]);
        if (n == 2) hs.push_back(h[1]);
        holder.add(diff, hn * std::pow(t, beta / m) / std::pow(tau + r, n + beta + 1.0), std::move(hs));
      }
    }
  }

  KernelBoundReport report;
  for (auto* acc : {&upper, &deriv, &qker, &decay, &holder, &mono}) report.records.push_back(acc->take());
  return report;
}

}  // namespace morrey
