#include <gtest/gtest.h>

#include <cmath>

#include "morrey/corpus.hpp"
#include "morrey/error.hpp"
#include "morrey/operators.hpp"
#include "oracles.hpp"

using namespace morrey;

namespace {

const Grid kCircle(1, 64, 2.0 * oracle::pi);

Field eix(const Grid& g) {
  return Field::from_function(g, [](const Point& x) { return std::polar(1.0, x[0]); });
}

double rel_diff(const Field& a, const Field& b) { return (a - b).max_abs() / std::max(1e-300, b.max_abs()); }

}  // namespace

TEST(Generator, NamesAndSymbols) {
  EXPECT_EQ(GeneratorSpec::from_name("heat"), GeneratorSpec::heat());
  EXPECT_EQ(GeneratorSpec::from_name("poisson"), GeneratorSpec::poisson());
  EXPECT_THROW(GeneratorSpec::from_name("wave"), ParameterError);
  EXPECT_EQ(GeneratorSpec::heat().order(), 2.0);
  EXPECT_EQ(GeneratorSpec::poisson().order(), 1.0);
  EXPECT_TRUE(std::isinf(GeneratorSpec::heat().theta()));
  EXPECT_EQ(GeneratorSpec::poisson().theta(), 1.0);
  EXPECT_EQ(GeneratorSpec::heat().symbol(3.0), 9.0);
  EXPECT_EQ(GeneratorSpec::poisson().symbol(0.0), 0.0);
}

TEST(Generator, SymbolTableAndRange) {
  const Grid g(2, 16, 2.0 * oracle::pi);
  const auto a = symbol_table(g, GeneratorSpec::heat());
  EXPECT_EQ(a[0], 0.0);
  for (std::size_t k = 1; k < a.size(); ++k) EXPECT_GT(a[k], 0.0);
  const SymbolRange r = symbol_range(g, GeneratorSpec::heat());
  EXPECT_NEAR(r.min_nonzero, 1.0, 1e-14);
  EXPECT_NEAR(r.max, 128.0, 1e-12);
}

TEST(ApplyP, EigenfunctionExamples) {
  for (auto gen : {GeneratorSpec::heat(), GeneratorSpec::poisson()}) {
    const Field f = eix(kCircle);
    for (double t : {0.1, 1.0, 2.5}) EXPECT_LT(rel_diff(apply_P(gen, t, f), std::exp(-t) * f), 1e-13);
  }
}

TEST(ApplyP, ConstantsAndEdgeTimes) {
  const Field c = Field::constant(kCircle, 2.0);
  for (auto gen : {GeneratorSpec::heat(), GeneratorSpec::poisson()}) {
    EXPECT_LT(rel_diff(apply_P(gen, 3.0, c), c), 1e-14);
    EXPECT_LT(apply_Q(gen, 3.0, c).max_abs(), 1e-14);
    const Field f = trig_field(kCircle, 5, 3);
    EXPECT_EQ((apply_P(gen, 0.0, f) - f).max_abs(), 0.0);
    EXPECT_THROW(apply_P(gen, -1.0, f), ParameterError);
    EXPECT_THROW(apply_Q(gen, 0.0, f), ParameterError);
  }
}

TEST(ApplyP, MatchesNaiveSynthesis) {
  const Field f = trig_field(kCircle, 10, 8);
  for (auto gen : {GeneratorSpec::heat(), GeneratorSpec::poisson()}) {
    const double t = 0.07;
    const auto ref = oracle::multiplier_1d(f, [&](double xi) { return std::exp(-t * gen.symbol(xi)); });
    const Field out = apply_P(gen, t, f);
    for (std::size_t i = 0; i < out.size(); ++i) EXPECT_NEAR(std::abs(out[i] - ref[i]), 0.0, 1e-11);
  }
}

TEST(ApplyQ, EigenfunctionPeakAtOne) {
  const Field f = eix(kCircle);
  const Field q = apply_Q(GeneratorSpec::heat(), 1.0, f);
  EXPECT_LT(rel_diff(q, std::exp(-1.0) * f), 1e-13);
  for (double t : {0.5, 0.9, 1.1, 2.0}) EXPECT_LT(apply_Q(GeneratorSpec::heat(), t, f).max_abs(), q.max_abs());
}

TEST(ApplyQ, IsMinusTimeDerivativeOfP) {
  const Field f = trig_field(kCircle, 6, 2);
  for (auto gen : {GeneratorSpec::heat(), GeneratorSpec::poisson()}) {
    const double t = 0.3, d = 1e-5;
    const Field fd = (-t / (2 * d)) * (apply_P(gen, t + d, f) - apply_P(gen, t - d, f));
    EXPECT_LT(rel_diff(apply_Q(gen, t, f), fd), 1e-7);
  }
}

TEST(ApplyQ, CompositionMultiplier) {
  const Field f = trig_field(kCircle, 12, 21);
  for (auto gen : {GeneratorSpec::heat(), GeneratorSpec::poisson()}) {
    const double t1 = 0.03, t2 = 0.11;
    const auto ref = oracle::multiplier_1d(f, [&](double xi) {
      const double a = gen.symbol(xi);
      return t1 * t2 * a * a * std::exp(-(t1 + t2) * a);
    });
    const Field out = apply_Q(gen, t1, apply_Q(gen, t2, f));
    for (std::size_t i = 0; i < out.size(); ++i) EXPECT_NEAR(std::abs(out[i] - ref[i]), 0.0, 1e-12);
  }
}

TEST(Semigroup, LawCommutativitySelfAdjointness) {
  const Grid g(2, 32, 3.0);
  const Field f = trig_field(g, 6, 4), h = trig_field(g, 5, 5);
  Rng rng(7);
  for (auto gen : {GeneratorSpec::heat(), GeneratorSpec::poisson()}) {
    for (int k = 0; k < 5; ++k) {
      const double s = rng.uniform(0.001, 0.3), t = rng.uniform(0.001, 0.3);
      EXPECT_LE((apply_P(gen, t, apply_P(gen, s, f)) - apply_P(gen, t + s, f)).max_abs(), 1e-12 * f.max_abs());
      EXPECT_LE((apply_P(gen, t, apply_Q(gen, s, f)) - apply_Q(gen, s, apply_P(gen, t, f))).max_abs(),
                1e-12 * f.max_abs());
      cplx lhs = 0.0, rhs = 0.0;
      const Field pf = apply_P(gen, t, f), ph = apply_P(gen, t, h);
      for (std::size_t i = 0; i < f.size(); ++i) {
        lhs += pf[i] * h[i];
        rhs += f[i] * ph[i];
      }
      EXPECT_NEAR(std::abs(lhs - rhs), 0.0, 1e-10 * std::abs(lhs));
    }
  }
}

TEST(Semigroup, MeanPreservedAndAnnihilated) {
  const Grid g(1, 128, 5.0);
  Rng rng(1);
  std::vector<cplx> v(g.size());
  for (auto& x : v) x = rng.uniform(-1, 1);
  const Field f(g, v);
  for (auto gen : {GeneratorSpec::heat(), GeneratorSpec::poisson()}) {
    EXPECT_NEAR(std::abs(forward_transform(apply_P(gen, 0.2, f))[0] - forward_transform(f)[0]), 0.0, 1e-15);
    EXPECT_LT(std::abs(forward_transform(apply_Q(gen, 0.2, f))[0]), 1e-15);
  }
}

TEST(SemigroupWeights, SumToOneAndReproduceP) {
  const Grid g(1, 64, 2.0);
  const Field f = trig_field(g, 7, 9);
  for (auto gen : {GeneratorSpec::heat(), GeneratorSpec::poisson()}) {
    const auto w = semigroup_weights(gen, 0.01, g);
    double sum = 0.0;
    for (double x : w) sum += x;
    EXPECT_NEAR(sum, 1.0, 1e-13);
    const Field ref = apply_P(gen, 0.01, f);
    for (int x = 0; x < 64; x += 9) {
      cplx s = 0.0;
      for (int d = 0; d < 64; ++d) s += w[d] * f[((x - d) % 64 + 64) % 64];
      EXPECT_NEAR(std::abs(s - ref[x]), 0.0, 1e-12);
    }
  }
}

TEST(Kernel, ClosedFormValues) {
  const KernelProfile heat(GeneratorKind::Heat, 1), poisson(GeneratorKind::Poisson, 1);
  EXPECT_NEAR(kernel_eval(heat, 1.0, {0, 0}), 0.28209479177387814, 1e-15);
  EXPECT_NEAR(kernel_eval(poisson, 1.0, {0, 0}), 1.0 / oracle::pi, 1e-15);
  EXPECT_NEAR(poisson_constant(1), 1.0 / oracle::pi, 1e-15);
  EXPECT_NEAR(poisson_constant(2), 1.0 / (2.0 * oracle::pi), 1e-15);
  const KernelProfile heat2(GeneratorKind::Heat, 2);
  EXPECT_NEAR(kernel_eval(heat2, 0.5, {0.3, 0.4}), std::exp(-0.125) / (2.0 * oracle::pi), 1e-15);
}

TEST(Kernel, PoissonIntegratesToOne) {
  const KernelProfile poisson(GeneratorKind::Poisson, 1);
  // Simpson on [-R, R] plus the arctangent tails.
  const double R = 50.0;
  const int M = 200000;
  const double dx = 2 * R / M;
  double s = 0.0;
  for (int i = 0; i <= M; ++i) {
    const double w = (i == 0 || i == M) ? 1 : (i % 2 ? 4 : 2);
    s += w * poisson.kernel(1.0, std::fabs(-R + i * dx));
  }
  s *= dx / 3.0;
  s += 2.0 * (0.5 - std::atan(R) / oracle::pi);
  EXPECT_NEAR(s, 1.0, 1e-8);
}

TEST(Kernel, TimeDerivativeExample) {
  const KernelProfile heat(GeneratorKind::Heat, 1);
  EXPECT_NEAR(std::fabs(heat.time_derivative(1.0, 0.0)), 0.28209479177387814 / 2.0, 1e-15);
  EXPECT_LE(std::fabs(heat.time_derivative(1.0, 0.0)),
            heat.derivative_constant() * heat.derivative_envelope(0.0) + 1e-15);
  for (auto kind : {GeneratorKind::Heat, GeneratorKind::Poisson}) {
    const KernelProfile prof(kind, 2);
    const double t = 0.4, r = 0.7, d = 1e-6;
    const double fd = t * (prof.kernel(t + d, r) - prof.kernel(t - d, r)) / (2 * d);
    EXPECT_NEAR(prof.time_derivative(t, r), fd, 1e-8);
    const double gd = (prof.kernel(t, r + d) - prof.kernel(t, r - d)) / (2 * d);
    EXPECT_NEAR(prof.gradient_magnitude(t, r), std::fabs(gd), 1e-8);
  }
}

TEST(Kernel, PoissonPolynomialDecayWithFourOverPi) {
  const KernelProfile poisson(GeneratorKind::Poisson, 1);
  EXPECT_LE(poisson.decay_constant(), 4.0 / oracle::pi);
  for (double t : {0.01, 0.3, 2.0})
    for (double x = 0.0; x < 30.0; x += 0.37)
      EXPECT_LE(poisson.kernel(t, x), 4.0 / oracle::pi * t / ((t + x) * (t + x)));
}

TEST(Kernel, BoundsHoldOnSamples) {
  for (int n : {1, 2})
    for (auto kind : {GeneratorKind::Heat, GeneratorKind::Poisson}) {
      const KernelProfile prof(kind, n);
      std::vector<double> ts{1e-3, 0.02, 0.5, 3.0};
      std::vector<Point> xs, hs;
      for (int i = 0; i < 30; ++i) xs.push_back({0.013 * i * i, n == 2 ? 0.007 * i * i : 0.0});
      for (double h : {1e-4, 0.01, 0.2}) hs.push_back({h, n == 2 ? -h : 0.0});
      const auto rep = verify_kernel_bounds(prof, ts, xs, hs);
      ASSERT_EQ(rep.records.size(), 6u);
      for (const auto& r : rep.records) {
        EXPECT_EQ(r.violations, 0u) << r.bound_id;
        EXPECT_TRUE(std::isfinite(r.recorded_constant)) << r.bound_id;
        EXPECT_LE(r.worst_constant, r.recorded_constant * (1 + 1e-9)) << r.bound_id;
      }
    }
}

TEST(Kernel, PeriodizedPositiveAndLowerBound) {
  const Grid g(1, 128, 2.0 * oracle::pi);
  const KernelProfile heat(GeneratorKind::Heat, 1), poisson(GeneratorKind::Poisson, 1);
  for (double t : {0.01, 0.1, 1.0}) {
    const auto ph = periodized_kernel(heat, t, g).values;
    const auto pp = periodized_kernel(poisson, t, g).values;
    for (std::size_t i = 0; i < ph.size(); ++i) {
      EXPECT_GT(ph[i], 0.0);
      EXPECT_GT(pp[i], 0.0);
      const double d = g.periodic_distance(g.unflatten(i), Index{0, 0});
      if (d <= std::sqrt(t)) EXPECT_GE(ph[i], std::pow(4 * oracle::pi, -0.5) * std::exp(-0.25) / std::sqrt(t));
    }
  }
}

TEST(Kernel, PoissonPeriodizationMatchesLatticeSum) {
  const Grid g(1, 32, 2.0);
  const KernelProfile poisson(GeneratorKind::Poisson, 1);
  const auto exact = periodized_kernel(poisson, 0.05, g).values;
  for (std::size_t i = 0; i < exact.size(); i += 5) {
    const double x = (int(i) > 16 ? int(i) - 32 : int(i)) * g.spacing();
    double s = 0.0;
    for (int j = -200000; j <= 200000; ++j) s += poisson.kernel(0.05, std::fabs(x + 2.0 * j));
    EXPECT_NEAR(exact[i], s, 1e-6);
  }
}

TEST(Kernel, CrossValidation) {
  const Grid g(1, 256, 2.0 * oracle::pi);
  const Field f = trig_field(g, 20, 31);
  EXPECT_LE(cross_validate_kernel(GeneratorSpec::heat(), KernelProfile(GeneratorKind::Heat, 1), 0.01, f), 1e-6);
  EXPECT_LE(cross_validate_kernel(GeneratorSpec::poisson(), KernelProfile(GeneratorKind::Poisson, 1), 0.05, f), 1e-4);
  const Field one = Field::constant(g, 1.0);
  EXPECT_LE(cross_validate_kernel(GeneratorSpec::heat(), KernelProfile(GeneratorKind::Heat, 1), 0.2, one), 1e-10);
  EXPECT_THROW(cross_validate_kernel(GeneratorSpec::heat(), KernelProfile(GeneratorKind::Poisson, 1), 0.2, one),
               ParameterError);
}

TEST(Kernel, CrossValidationRefusesLongTails) {
  const Grid g(2, 16, 2.0);
  const Field one = Field::constant(g, 1.0);
  EXPECT_THROW(cross_validate_kernel(GeneratorSpec::poisson(), KernelProfile(GeneratorKind::Poisson, 2), 0.05, one),
               TruncationError);
  const Grid g1(1, 16, 1.0);
  EXPECT_THROW(cross_validate_kernel(GeneratorSpec::heat(), KernelProfile(GeneratorKind::Heat, 1), 1e4,
                                     Field::constant(g1, 1.0)),
               TruncationError);
}

TEST(Kernel, EpsilonRecords) {
  EXPECT_TRUE(std::isinf(KernelProfile(GeneratorKind::Heat, 1).epsilon_sup()));
  EXPECT_EQ(KernelProfile(GeneratorKind::Poisson, 1).epsilon_sup(), 1.0);
  EXPECT_EQ(KernelProfile(GeneratorKind::Heat, 1).epsilon_zero(), 0.5);
  EXPECT_EQ(KernelProfile(GeneratorKind::Poisson, 2).epsilon_zero(), 0.5);
}
