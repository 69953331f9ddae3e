#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "geopot/quadrature.hpp"

using namespace geopot;

TEST(Quadrature, PolynomialIsExact) {
  const QuadResult r = integrate([](double x) { return x * x * x * x * x; }, 0.0, 1.0);
  EXPECT_NEAR(r.value, 1.0 / 6.0, 1e-15);
  EXPECT_GT(r.evaluations, 0);
}

TEST(Quadrature, EndpointSingularities) {
  EXPECT_NEAR(integrate([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0).value, 2.0, 1e-9);
  EXPECT_NEAR(integrate([](double x) { return std::log(x); }, 0.0, 1.0).value, -1.0, 1e-9);
  EXPECT_THROW(integrate([](double x) { return 1.0 / x; }, 0.0, 1.0), NonConvergence);
}

TEST(Quadrature, ErrorEstimateCoversTheError) {
  QuadOptions opt;
  opt.rel_tol = 1e-6;
  const QuadResult r = integrate([](double x) { return std::exp(std::sin(5 * x)); }, 0.0, 3.0, opt);
  const QuadResult ref = integrate([](double x) { return std::exp(std::sin(5 * x)); }, 0.0, 3.0);
  EXPECT_LE(std::abs(r.value - ref.value), std::max(r.abs_error, 1e-14));
}

TEST(Quadrature, SemiInfiniteRanges) {
  EXPECT_NEAR(integrate_to_infinity([](double t) { return std::exp(-t); }, 1.0, 1.0).value, std::exp(-1.0), 1e-12);
  EXPECT_NEAR(integrate_to_infinity([](double t) { return 1.0 / (1.0 + t * t); }, 0.0, 1.0).value,
              std::numbers::pi / 2, 1e-10);
  EXPECT_NEAR(integrate_algebraic_tail([](double t) { return std::pow(t, -1.5); }, 1.0, 1.0).value, 2.0, 1e-9);
}

TEST(Quadrature, BudgetOverrun) {
  QuadOptions opt;
  opt.max_intervals = 3;
  opt.rel_tol = 1e-14;
  auto f = [](double x) { return std::sin(1.0 / x); };
  EXPECT_THROW(integrate(f, 1e-4, 1.0, opt), NonConvergence);
  try {
    integrate(f, 1e-4, 1.0, opt);
  } catch (const NonConvergence& e) {
    EXPECT_GT(e.abs_error(), 0.0);
  }
  opt.throw_on_failure = false;
  const QuadResult partial = integrate(f, 1e-4, 1.0, opt);
  EXPECT_TRUE(std::isfinite(partial.value));
}

TEST(Quadrature, ResultsAdd) {
  QuadResult a{1.0, 0.1, 15}, b{2.0, 0.2, 30};
  const QuadResult c = a + b;
  EXPECT_DOUBLE_EQ(c.value, 3.0);
  EXPECT_DOUBLE_EQ(c.abs_error, 0.30000000000000004);
  EXPECT_EQ(c.evaluations, 45);
}
