#include <gtest/gtest.h>

#include <cmath>

#include "morrey/corpus.hpp"
#include "morrey/error.hpp"
#include "morrey/quadrature.hpp"
#include "oracles.hpp"

using namespace morrey;

TEST(LogTimeGrid, StructureAndValidation) {
  const LogTimeGrid g(1e-3, 10.0, 64);
  EXPECT_EQ(g.size(), 64);
  double sum = 0.0;
  for (int j = 0; j < g.size(); ++j) {
    sum += g.weights()[j];
    if (j) EXPECT_GT(g.nodes()[j], g.nodes()[j - 1]);
    EXPECT_GT(g.nodes()[j], g.t_min());
    EXPECT_LT(g.nodes()[j], g.t_max());
  }
  EXPECT_NEAR(sum, std::log(1e4), 1e-13);
  EXPECT_THROW(LogTimeGrid(1e-3, 10.0, 15), ParameterError);
  EXPECT_THROW(LogTimeGrid(0.0, 10.0, 64), ParameterError);
  EXPECT_THROW(LogTimeGrid(2.0, 1.0, 64), ParameterError);
}

TEST(Integrate, ConstantsAndLengthCheck) {
  const LogTimeGrid g(1e-2, 5.0, 32);
  const std::vector<double> ones(32, 1.0);
  EXPECT_NEAR(integrate_dt_over_t(ones, g), std::log(500.0), 1e-13);
  EXPECT_THROW(integrate_dt_over_t(std::vector<double>(31, 1.0), g), InputError);
  const std::vector<cplx> c(32, cplx(0, 2));
  EXPECT_NEAR(integrate_dt_over_t(c, g).imag(), 2 * std::log(500.0), 1e-13);
}

TEST(Integrate, GammaIntegral) {
  const LogTimeGrid g(1e-6, 50.0, 2048);
  std::vector<double> v(g.size());
  for (int j = 0; j < g.size(); ++j) v[j] = g.nodes()[j] * std::exp(-2 * g.nodes()[j]);
  EXPECT_NEAR(integrate_dt_over_t(v, g), oracle::gamma_integral(1, 2), 1e-6);
}

TEST(Calderon, ConstantForBothOrders) {
  const double expected1 = oracle::gamma_integral(2, 2) - oracle::gamma_integral(2, 3);
  EXPECT_NEAR(expected1, 5.0 / 36.0, 1e-15);
  EXPECT_EQ(calderon_constant(1), 36.0 / 5.0);
  const LogTimeGrid g(1e-4, 20.0, 2048);
  const auto c1 = calderon_constant_check(1, g);
  const auto c2 = calderon_constant_check(2, g);
  EXPECT_LE(c1.relative_error, 1e-6);
  EXPECT_LE(c2.relative_error, 1e-6);
  EXPECT_NEAR(c2.integral, 0.5 * c1.integral, 1e-9);
  EXPECT_THROW(calderon_constant_check(3, g), ParameterError);
}

TEST(Calderon, ConvergesFasterThanSecondOrder) {
  std::vector<double> err;
  for (int K : {16, 32, 64}) err.push_back(calderon_constant_check(1, LogTimeGrid(1e-4, 30.0, K)).relative_error);
  EXPECT_LT(err[1], err[0] / 4);
  EXPECT_LT(err[2], err[1] / 4);
}

TEST(Calderon, MultiplierNearOneInsideSpan) {
  const LogTimeGrid g(1e-5, 1e2, 1024);
  for (double a : {1.0, 10.0, 100.0}) EXPECT_NEAR(calderon_multiplier(a, 1, g), 1.0, 1e-6);
}

TEST(Calderon, ReproducesMeanFreeFields) {
  const Grid g(1, 128, 2.0 * oracle::pi);
  for (auto gen : {GeneratorSpec::heat(), GeneratorSpec::poisson()}) {
    const LogTimeGrid tg = LogTimeGrid::for_grid(g, gen, 512);
    const Field wave = Field::from_function(g, [](const Point& x) { return std::polar(1.0, x[0]); });
    EXPECT_LE(lp_norm(calderon_reproduce(gen, wave, tg) - wave, 2) / lp_norm(wave, 2), 1e-3);
    const Field h = trig_field(g, 30, 17);
    EXPECT_LE(lp_norm(calderon_reproduce(gen, h, tg) - h, 2) / lp_norm(h, 2), 1e-3);
    EXPECT_LT(calderon_reproduce(gen, Field::constant(g, 4.0), tg).max_abs(), 1e-14);
  }
}

TEST(Calderon, Linear) {
  const Grid g(2, 16, 1.0);
  const auto gen = GeneratorSpec::heat();
  const LogTimeGrid tg = LogTimeGrid::for_grid(g, gen, 128);
  const Field a = trig_field(g, 3, 1), b = trig_field(g, 3, 2);
  const Field lhs = calderon_reproduce(gen, 2.0 * a + b, tg);
  const Field rhs = 2.0 * calderon_reproduce(gen, a, tg) + calderon_reproduce(gen, b, tg);
  EXPECT_LT((lhs - rhs).max_abs(), 1e-12 * lhs.max_abs());
}

TEST(Calderon, SpanViolationReportsTail) {
  const Grid g(1, 64, 2.0 * oracle::pi);
  const LogTimeGrid narrow(1e-2, 1.0, 256);
  try {
    calderon_reproduce(GeneratorSpec::heat(), trig_field(g, 4, 1), narrow);
    FAIL() << "expected a truncation error";
  } catch (const TruncationError& e) {
    EXPECT_GT(e.estimated_tail(), 0.0);
  }
}

TEST(Calderon, ErrorShrinksAsSpanWidens) {
  const Grid g(1, 64, 2.0 * oracle::pi);
  const auto gen = GeneratorSpec::poisson();
  const Field h = trig_field(g, 20, 5);
  const SymbolRange range = symbol_range(g, gen);
  double previous = 1e300;
  for (double widen : {1.0, 3.0, 10.0}) {
    const LogTimeGrid tg(0.1 / range.max / widen, 20.0 / range.min_nonzero * widen, 1024);
    const double err = lp_norm(calderon_reproduce(gen, h, tg) - h, 2) / lp_norm(h, 2);
    EXPECT_LT(err, previous);
    previous = err;
  }
}
