#include <gtest/gtest.h>

#include <cmath>

#include "morrey/corpus.hpp"
#include "morrey/error.hpp"
#include "morrey/norms.hpp"
#include "oracles.hpp"

using namespace morrey;

namespace {

const GeneratorSpec kHeat = GeneratorSpec::heat();
const GeneratorSpec kPoisson = GeneratorSpec::poisson();

std::vector<double> radii_between(const Grid& g, double lo, double hi) {
  std::vector<double> out;
  for (double r : dyadic_radii(g))
    if (r >= lo * (1 - 1e-12) && r <= hi * (1 + 1e-12)) out.push_back(r);
  return out;
}

double spread(const std::vector<double>& v) {
  return *std::max_element(v.begin(), v.end()) / *std::min_element(v.begin(), v.end());
}

Field random_field(const Grid& g, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<cplx> v(g.size());
  for (auto& x : v) x = {rng.uniform(-1, 1), rng.uniform(-1, 1)};
  return Field(g, std::move(v));
}

}  // namespace

TEST(MorreyParams, Validation) {
  EXPECT_NO_THROW((MorreyParams{1.0, 0.5}.validate(1)));
  EXPECT_THROW((MorreyParams{0.9, 0.5}.validate(1)), ParameterError);
  EXPECT_THROW((MorreyParams{2.0, 1.0}.validate(1)), ParameterError);
  EXPECT_THROW((MorreyParams{2.0, 0.0}.validate(2)), ParameterError);
  EXPECT_NO_THROW((MorreyParams{2.0, 1.5}.validate(2)));
}

TEST(SeminormKind, NamesRoundTrip) {
  for (auto k : {SeminormKind::Classical, SeminormKind::Semigroup, SeminormKind::Maximal,
                 SeminormKind::PoissonPointwise, SeminormKind::SquareFnPoisson, SeminormKind::SquareFnL,
                 SeminormKind::CarlesonTent})
    EXPECT_EQ(seminorm_kind_from_string(to_string(k)), k);
  EXPECT_THROW(seminorm_kind_from_string("bmo"), ParameterError);
}

TEST(Seminorms, VanishOnConstants) {
  for (int n : {1, 2}) {
    const Grid g(n, n == 1 ? 128 : 32, 2.0 * oracle::pi);
    const Field c = Field::constant(g, cplx(2.0, -1.0));
    const MorreyParams params{2.0, 0.5};
    const BallSet balls = BallSet::lattice(g, dyadic_radii(g), 4);
    std::vector<double> ts;
    for (double r : balls.radii()) ts.push_back(r);
    const LogTimeGrid tg = LogTimeGrid::for_grid(g, kHeat, 128);
    EXPECT_LT(classical_seminorm(c, params, balls).value, 1e-12);
    EXPECT_LT(classical_seminorm(c, {1.5, 0.5}, balls).value, 1e-12);
    EXPECT_LT(semigroup_seminorm(c, params, kHeat, balls).value, 1e-12);
    EXPECT_LT(maximal_seminorm(c, params, kHeat, ts, 4).value, 1e-12);
    EXPECT_LT(poisson_pointwise_seminorm(c, params, kPoisson, ts, 4).value, 1e-7);
    EXPECT_LT(square_function_seminorm(c, params, kHeat, balls, tg, SquareVariant::SquareFnL).value, 1e-12);
    EXPECT_LT(square_function_seminorm(c, params, kHeat, balls, tg, SquareVariant::SquareFnPoisson).value, 1e-12);
    EXPECT_LT(carleson_tent_norm(c, params, kHeat, balls, tg).value, 1e-12);
  }
}

TEST(Classical, ReportValueIsTableMax) {
  const Grid g(1, 64, 1.0);
  const auto rep = classical_seminorm(random_field(g, 1), {2.0, 0.5}, BallSet::lattice(g, dyadic_radii(g), 2));
  double best = 0.0;
  for (const auto& s : rep.table) best = std::max(best, s.value);
  EXPECT_EQ(rep.value, best);
  EXPECT_EQ(rep.witness.value, best);
  EXPECT_EQ(rep.table.size(), 32u * dyadic_radii(g).size());
}

TEST(Classical, HalfBoxIndicatorMatchesExhaustiveBruteForce) {
  const Grid g(1, 64, 2.0);
  const Field f = Field::from_function(g, [](const Point& x) { return x[0] < 0 ? 1.0 : 0.0; });
  const std::vector<double> radii{2 * g.spacing(), 3.5 * g.spacing(), 8 * g.spacing(), 0.5};
  for (double p : {1.0, 2.0, 3.0}) {
    const MorreyParams params{p, 0.4};
    double brute = 0.0;
    for (std::size_t c = 0; c < g.size(); ++c)
      for (double r : radii) brute = std::max(brute, oracle::ball_oscillation(f, c, r, p, 0.4));
    EXPECT_NEAR(classical_seminorm(f, params, BallSet::lattice(g, radii, 1)).value, brute, 1e-12 * brute);
  }
}

TEST(Classical, WindowedMatchesDirect) {
  for (int n : {1, 2}) {
    const Grid g(n, n == 1 ? 256 : 32, 3.0);
    const Field f = random_field(g, 7);
    const BallSet balls = BallSet::lattice(g, dyadic_radii(g), 3);
    const auto a = classical_seminorm(f, {2.0, 0.5}, balls, EvaluationMethod::Windowed);
    const auto b = classical_seminorm(f, {2.0, 0.5}, balls, EvaluationMethod::Direct);
    ASSERT_EQ(a.table.size(), b.table.size());
    for (std::size_t i = 0; i < a.table.size(); ++i)
      EXPECT_NEAR(a.table[i].value, b.table[i].value, 1e-10 * b.value);
  }
  const Grid g(1, 16, 1.0);
  EXPECT_THROW(classical_seminorm(Field::constant(g, 1.0), {3.0, 0.5}, BallSet::lattice(g, {0.2}, 1),
                                  EvaluationMethod::Windowed),
               ParameterError);
}

TEST(Classical, PowerLawScalesLikeMorrey) {
  for (int n : {1, 2}) {
    const Grid g(n, n == 1 ? 1024 : 256, 2.0 * oracle::pi);
    const double lambda = 0.5 * n;
    const Field f = power_law_field(g, 2.0, lambda);
    const auto radii = radii_between(g, 8 * g.spacing(), g.domain_length() / 8);
    ASSERT_GE(radii.size(), 3u);
    std::vector<double> scaled;
    for (double r : radii) {
      const Ball b = make_ball(g, g.origin(), r);
      scaled.push_back(std::pow(r, -lambda) * ball_lp_deviation(f, b, ball_mean(f, b), 2.0));
    }
    EXPECT_LT(spread(scaled), 1.10) << "n=" << n;
  }
}

TEST(Seminorms, AbsolutelyHomogeneous) {
  const Grid g(1, 128, 2.0);
  const Field f = random_field(g, 3);
  const cplx alpha{-1.2, 0.7};
  const BallSet balls = BallSet::lattice(g, dyadic_radii(g), 4);
  const LogTimeGrid tg = LogTimeGrid::for_grid(g, kHeat, 64);
  const MorreyParams params{2.0, 0.3};
  const std::vector<double> ts{0.01, 0.1};
  auto check = [&](auto fn) { EXPECT_NEAR(fn(alpha * f), std::abs(alpha) * fn(f), 1e-12 * fn(alpha * f)); };
  check([&](const Field& x) { return classical_seminorm(x, {1.5, 0.3}, balls).value; });
  check([&](const Field& x) { return semigroup_seminorm(x, params, kHeat, balls).value; });
  check([&](const Field& x) { return maximal_seminorm(x, params, kHeat, ts, 4).value; });
  check([&](const Field& x) { return poisson_pointwise_seminorm(x, params, kPoisson, ts, 8).value; });
  check([&](const Field& x) {
    return square_function_seminorm(x, params, kHeat, balls, tg, SquareVariant::SquareFnPoisson).value;
  });
  check([&](const Field& x) { return carleson_tent_norm(x, params, kHeat, balls, tg).value; });
}

TEST(Classical, TriangleInequality) {
  const Grid g(2, 32, 1.0);
  const BallSet balls = BallSet::lattice(g, dyadic_radii(g), 2);
  for (std::uint64_t s = 0; s < 5; ++s) {
    const Field a = random_field(g, 2 * s), b = random_field(g, 2 * s + 1);
    for (double p : {1.0, 2.0, 3.0}) {
      const MorreyParams params{p, 1.0};
      EXPECT_LE(classical_seminorm(a + b, params, balls).value,
                classical_seminorm(a, params, balls).value + classical_seminorm(b, params, balls).value + 1e-10);
    }
  }
}

TEST(Seminorms, MonotoneUnderBallEnlargement) {
  const Grid g(1, 128, 1.0);
  const Field f = trig_field(g, 9, 4);
  const auto radii = dyadic_radii(g);
  const std::vector<double> some(radii.begin(), radii.begin() + 2);
  const MorreyParams params{2.0, 0.5};
  EXPECT_LE(classical_seminorm(f, params, BallSet::lattice(g, some, 8)).value,
            classical_seminorm(f, params, BallSet::lattice(g, radii, 4)).value);
  EXPECT_LE(semigroup_seminorm(f, params, kHeat, BallSet::lattice(g, some, 8)).value,
            semigroup_seminorm(f, params, kHeat, BallSet::lattice(g, radii, 4)).value);
}

TEST(Semigroup, EigenfunctionClosedForm) {
  const Grid g(1, 128, 2.0 * oracle::pi);
  const Field f = Field::from_function(g, [](const Point& x) { return std::polar(1.0, x[0]); });
  const double lambda = 0.5;
  const BallSet balls = BallSet::lattice(g, dyadic_radii(g), 16);
  const auto rep = semigroup_seminorm(f, {2.0, lambda}, kHeat, balls);
  for (const auto& s : rep.table) {
    const double t = s.scale * s.scale;
    const double count = double(oracle::disk(g, g.flatten(s.center), s.scale).size());
    const double expected = (1.0 - std::exp(-t)) * std::sqrt(std::pow(s.scale, -lambda) * count * g.spacing());
    EXPECT_NEAR(s.value, expected, 1e-10 * expected);
  }
}

TEST(Semigroup, DirectBallSumOracle) {
  const Grid g(2, 16, 2.0);
  const Field f = random_field(g, 12);
  const BallSet balls = BallSet::lattice(g, dyadic_radii(g), 3);
  const auto rep = semigroup_seminorm(f, {3.0, 0.7}, kPoisson, balls);
  for (const auto& s : rep.table) {
    const Field pf = apply_P(kPoisson, s.scale, f);
    double sum = 0.0;
    for (auto j : oracle::disk(g, g.flatten(s.center), s.scale)) sum += std::pow(std::abs(f[j] - pf[j]), 3.0);
    EXPECT_NEAR(s.value, std::cbrt(std::pow(s.scale, -0.7) * sum * g.cell_volume()), 1e-12 * rep.value);
  }
}

TEST(Maximal, DirectOracleAndRange) {
  const Grid g(1, 64, 2.0);
  const Field f = random_field(g, 2);
  const std::vector<double> ts{0.001, 0.01, 0.2};
  const MorreyParams params{2.0, 0.5};
  const auto rep = maximal_seminorm(f, params, kHeat, ts, 8);
  EXPECT_EQ(rep.table.size(), 8u * 3u);
  for (const auto& s : rep.table) {
    const Field pf = apply_P(kHeat, s.scale, f);
    const auto w = semigroup_weights(kHeat, s.scale, g);
    const int x = s.center[0];
    double acc = 0.0;
    for (int y = 0; y < 64; ++y) acc += w[((x - y) % 64 + 64) % 64] * std::norm(f[y] - pf[y]);
    EXPECT_NEAR(s.value, std::pow(s.scale, 0.5 / 4) * std::sqrt(acc), 1e-10 * rep.value);
  }
  EXPECT_THROW(maximal_seminorm(f, params, kHeat, std::vector<double>{0.3}, 8), ParameterError);
  EXPECT_THROW(maximal_seminorm(f, params, kHeat, std::vector<double>{0.0}, 8), ParameterError);
}

TEST(PoissonPointwise, RequiresPoissonAndMatchesDirectSum) {
  const Grid g(1, 64, 2.0);
  const Field f = random_field(g, 6);
  const std::vector<double> ts{0.05, 0.3};
  EXPECT_THROW(poisson_pointwise_seminorm(f, {2.0, 0.5}, kHeat, ts, 8), ParameterError);
  const auto rep = poisson_pointwise_seminorm(f, {1.5, 0.5}, kPoisson, ts, 8);
  std::vector<cplx> delta(64, 0.0);
  delta[0] = 1.0;
  const Field d(g, delta);
  for (const auto& s : rep.table) {
    const auto k = oracle::multiplier_1d(d, [&](double xi) { return std::exp(-s.scale * xi); });
    auto w = [&](int y) { return k[((s.center[0] - y) % 64 + 64) % 64].real(); };
    cplx avg = 0.0;
    for (int y = 0; y < 64; ++y) avg += w(y) * f[y];
    double acc = 0.0;
    for (int y = 0; y < 64; ++y) acc += w(y) * std::pow(std::abs(f[y] - avg), 1.5);
    EXPECT_NEAR(s.value, std::pow(std::pow(s.scale, 0.5) * acc, 1.0 / 1.5), 1e-10 * rep.value);
  }
}

TEST(PoissonPointwise, VarianceIdentity) {
  const Grid g(2, 16, 2.0);
  const Field f = random_field(g, 10);
  std::vector<PointTime> samples;
  Rng rng(3);
  for (int i = 0; i < 200; ++i)
    samples.push_back({{int(rng.uniform() * 16), int(rng.uniform() * 16)}, rng.uniform(0.01, 1.0)});
  EXPECT_LE(variance_identity_discrepancy(f, kPoisson, samples), 1e-10);
  EXPECT_LE(variance_identity_discrepancy(f, kHeat, samples), 1e-10);
}

TEST(SquareFunction, GlobalRatios) {
  const Grid g(1, 256, 2.0 * oracle::pi);
  const Field f = trig_field(g, 40, 8);
  const LogTimeGrid tg(1e-6, 1e3, 2048);
  for (auto gen : {kHeat, kPoisson}) {
    EXPECT_NEAR(g_function_ratio(f, gen, 2.0, tg), 0.5, 1e-4);
    EXPECT_NEAR(g_function_ratio(f, gen, 2.0, tg, SquareIntegrand::QComplement), std::sqrt(13.0) / 12.0, 1e-4);
  }
  const double oracle_sq = oracle::gamma_integral(2, 2) - 2 * oracle::gamma_integral(2, 3) +
                           oracle::gamma_integral(2, 4);
  EXPECT_NEAR(oracle_sq, 13.0 / 144.0, 1e-15);
}

TEST(SquareFunction, SingleFrequencyAnyP) {
  const Grid g(1, 64, 2.0 * oracle::pi);
  const Field f = Field::from_function(g, [](const Point& x) { return std::polar(1.0, 3 * x[0]); });
  const LogTimeGrid tg(1e-5, 1e3, 1024);
  for (double p : {1.5, 4.0, 7.0}) EXPECT_NEAR(g_function_ratio(f, kHeat, p, tg), 0.5, 1e-4);
  const Field G = square_function_field(f, kHeat, tg);
  for (std::size_t i = 1; i < G.size(); ++i) EXPECT_NEAR(G[i].real(), G[0].real(), 1e-12);
}

TEST(SquareFunction, RatioPreconditions) {
  const Grid g(1, 64, 1.0);
  const LogTimeGrid tg(1e-5, 1e3, 64);
  EXPECT_THROW(g_function_ratio(Field::constant(g, 0.0), kHeat, 2.0, tg), InputError);
  EXPECT_THROW(g_function_ratio(Field::constant(g, 1.0), kHeat, 2.0, tg), InputError);
  EXPECT_THROW(g_function_ratio(trig_field(g, 3, 1), kHeat, 1.0, tg), ParameterError);
}

TEST(SquareFunction, BandAcrossCorpus) {
  const Grid g(1, 256, 2.0 * oracle::pi);
  std::vector<Field> fields;
  for (std::uint64_t s = 0; s < 4; ++s) fields.push_back(trig_field(g, 4 + 6 * int(s), s));
  const LogTimeGrid tg(1e-6, 1e3, 1024);
  const RatioBand band = g_function_band(fields, kHeat, 4.0, tg);
  EXPECT_GT(band.lower, 0.0);
  EXPECT_LE(band.lower, band.upper);
  EXPECT_TRUE(std::isfinite(band.upper));
}

TEST(SquareFunction, LocalizedMatchesDirectAggregate) {
  const Grid g(1, 64, 2.0 * oracle::pi);
  const Field f = trig_field(g, 10, 2);
  const LogTimeGrid tg = LogTimeGrid::for_grid(g, kPoisson, 128);
  const BallSet balls = BallSet::lattice(g, dyadic_radii(g), 8);
  const MorreyParams params{3.0, 0.5};
  const auto rep = square_function_seminorm(f, params, kPoisson, balls, tg, SquareVariant::SquareFnPoisson);
  for (const auto& s : rep.table) {
    std::vector<double> agg(g.size(), 0.0);
    for (int j = 0; j < tg.size() && tg.nodes()[j] <= s.scale * (1 + 1e-12); ++j) {
      const double t = tg.nodes()[j];
      const Field At = (-1.0) * apply_Q(kPoisson, t, f);
      for (std::size_t i = 0; i < agg.size(); ++i) agg[i] += std::norm(At[i]) * tg.weights()[j];
    }
    double sum = 0.0;
    for (auto i : oracle::disk(g, g.flatten(s.center), s.scale)) sum += std::pow(agg[i], 1.5);
    EXPECT_NEAR(s.value, std::cbrt(std::pow(s.scale, -0.5) * sum * g.spacing()), 1e-10 * rep.value);
  }
  EXPECT_GT(rep.truncation_estimate, 0.0);
  EXPECT_LT(rep.truncation_estimate, 1e-3);
}

TEST(Carleson, EqualsSquareFunctionAtPTwo) {
  for (int n : {1, 2}) {
    const Grid g(n, n == 1 ? 128 : 32, 2.0 * oracle::pi);
    const Field f = trig_field(g, n == 1 ? 12 : 5, 3);
    const BallSet balls = BallSet::lattice(g, dyadic_radii(g), 4);
    const LogTimeGrid tg = LogTimeGrid::for_grid(g, kHeat, 256);
    const MorreyParams params{2.0, 0.5 * n};
    const auto tent = carleson_tent_norm(f, params, kHeat, balls, tg);
    const auto sq = square_function_seminorm(f, params, kHeat, balls, tg, SquareVariant::SquareFnL);
    ASSERT_EQ(tent.table.size(), sq.table.size());
    for (std::size_t i = 0; i < tent.table.size(); ++i)
      EXPECT_NEAR(tent.table[i].value, sq.table[i].value, 1e-12 * sq.value);
    EXPECT_THROW(carleson_tent_norm(f, {3.0, 0.5}, kHeat, balls, tg), ParameterError);
  }
}

TEST(Carleson, PowerLawTentGrowsLikeRadiusToLambda) {
  const Grid g(1, 1024, 2.0 * oracle::pi);
  const double lambda = 0.5;
  const Field f = power_law_field(g, 2.0, lambda);
  const auto radii = radii_between(g, 8 * g.spacing(), g.domain_length() / 8);
  const BallSet balls = BallSet::centered(g, {g.origin()}, radii);
  const auto rep = carleson_tent_norm(f, {2.0, lambda}, kHeat, balls, LogTimeGrid::for_grid(g, kHeat, 512));
  std::vector<double> normalized;
  for (const auto& s : rep.table) normalized.push_back(s.value * s.value);  // mu(T(B)) / r^lambda
  EXPECT_LT(spread(normalized), 1.15);
}

TEST(GapDiagnostics, ConstantAndSkipped) {
  const Grid g(1, 64, 2.0);
  const Field c = Field::constant(g, 3.0);
  const std::vector<double> ts{0.01, 0.1}, ks{2, 4};
  const std::vector<Index> xs{{0, 0}};
  const std::vector<double> ds{0.5};
  EXPECT_TRUE(semigroup_gap_diagnostics(c, {2.0, 0.5}, kHeat, 0.0, ts, ks, xs, ds).skipped);
  const auto diag = semigroup_gap_diagnostics(c, {2.0, 0.5}, kHeat, 1.0, ts, ks, xs, ds);
  for (const auto& r : diag.gaps) EXPECT_LT(r.gap, 1e-14);
  for (const auto& r : diag.tails) EXPECT_LT(r.integral, 1e-14);
}

TEST(GapDiagnostics, PowerLawSlopeAndFactorIndependence) {
  const Grid g(1, 1024, 2.0 * oracle::pi);
  const MorreyParams params{2.0, 0.5};
  const Field f = power_law_field(g, 2.0, params.lambda);
  const double norm = semigroup_seminorm(f, params, kHeat, BallSet::lattice(g, dyadic_radii(g), 16)).value;
  std::vector<double> ts;
  for (int i = 0; i <= 8; ++i) ts.push_back(std::pow(8 * g.spacing(), 2) * std::pow(10.0, i / 4.0));
  const std::vector<double> ks{2, 4, 8};
  const auto diag = semigroup_gap_diagnostics(f, params, kHeat, norm, ts, ks, {}, {});
  std::vector<double> t2, gap2, ratios;
  for (const auto& r : diag.gaps) {
    if (r.factor == 2) {
      t2.push_back(r.t);
      gap2.push_back(r.gap);
    }
    ratios.push_back(r.ratio);
  }
  const double predicted = (params.lambda - 1.0) / (params.p * 2.0);
  EXPECT_NEAR(loglog_slope(t2, gap2), predicted, 0.15);
  EXPECT_LT(spread(ratios), 3.0 * 3.0);
  for (std::size_t i = 0; i < ts.size(); ++i) {
    std::vector<double> per_t(ratios.begin() + 3 * i, ratios.begin() + 3 * i + 3);
    EXPECT_LT(spread(per_t), 3.0);
  }
}

TEST(GapDiagnostics, WeightedTailsBounded) {
  const Grid g(1, 256, 2.0 * oracle::pi);
  const MorreyParams params{2.0, 0.5};
  const Field f = power_law_field(g, 2.0, params.lambda);
  const double norm = semigroup_seminorm(f, params, kPoisson, BallSet::lattice(g, dyadic_radii(g), 8)).value;
  const std::vector<double> ts{0.05, 0.2, 0.8};
  const std::vector<Index> xs{g.origin(), {0, 0}, {40, 0}};
  const std::vector<double> ds{0.25, 0.5};
  const auto diag = semigroup_gap_diagnostics(f, params, kPoisson, norm, ts, std::vector<double>{2.0}, xs, ds);
  ASSERT_EQ(diag.tails.size(), 3u * 3u * 2u);
  for (const auto& r : diag.tails) {
    EXPECT_TRUE(std::isfinite(r.ratio));
    EXPECT_GT(r.ratio, 0.0);
    EXPECT_LT(r.ratio, 100.0);
  }
}

TEST(LogLogSlope, RecoversPowerLaw) {
  const std::vector<double> x{1, 2, 4, 8}, y{3, 3 * std::pow(2, -0.3), 3 * std::pow(4, -0.3), 3 * std::pow(8, -0.3)};
  EXPECT_NEAR(loglog_slope(x, y), -0.3, 1e-14);
  EXPECT_THROW(loglog_slope(std::vector<double>{1}, std::vector<double>{1}), ParameterError);
}
