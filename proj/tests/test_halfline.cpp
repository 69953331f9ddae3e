#include <cmath>
#include <map>
#include <memory>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <gtest/gtest.h>

#include "geopot/halfline.hpp"
#include "geopot/stable_ref.hpp"

using namespace geopot;

namespace {

const HalfLine& geometric(double alpha) {
  static std::map<double, std::unique_ptr<HalfLine>> cache;
  auto& h = cache[alpha];
  if (!h) h = std::make_unique<HalfLine>(ProcessSpec::geometric(alpha));
  return *h;
}

double gamma_sq(double alpha) {
  const double g = boost::math::tgamma(1 + alpha / 2);
  return g * g;
}

}  // namespace

TEST(HalfLinePure, ReproducesStableKernels) {
  for (double a : {0.5, 1.0, 1.5}) {
    HalfLine h(ProcessSpec::pure(a, true));
    for (auto [x, y] : {std::pair{1.0, 2.0}, {0.2, 3.0}, {5.0, 0.5}})
      EXPECT_NEAR(h.green(x, y).value / green_stable_halfline(a, x, y), 1.0, 1e-8) << a;
    for (auto [x, z] : {std::pair{1.0, -1.0}, {0.3, -2.0}, {4.0, -0.1}})
      EXPECT_NEAR(h.poisson(x, z).value / (gamma_sq(a) * poisson_stable_halfline(a, x, z)), 1.0, 1e-6) << a;
  }
  HalfLine h1(ProcessSpec::pure(1.0, true));
  EXPECT_NEAR(h1.poisson(1.0, -1.0).value, 0.125, 1e-8);
  EXPECT_THROW(HalfLine(ProcessSpec::pure(2.0, true)).poisson(1.0, -1.0), std::invalid_argument);
}

TEST(HalfLine, FrozenGreenValues) {
  EXPECT_NEAR(geometric(2.0).green(1.0, 2.0).value, 1.60668648714, 1e-9);
  EXPECT_NEAR(geometric(1.5).green(1.0, 2.0).value, 1.09621980052, 1e-9);
  EXPECT_NEAR(geometric(0.5).green(1.0, 2.0).value, 0.297086793785, 1e-10);
  EXPECT_TRUE(std::isinf(geometric(1.0).green(1.0, 1.0).value));
}

TEST(HalfLine, FrozenPoissonValues) {
  const HalfLine& h = geometric(1.0);
  EXPECT_NEAR(h.poisson(1.0, -1.0).value, 0.1833095722, 1e-8);
  EXPECT_NEAR(h.poisson(1.0, -0.5).value, 0.3048444436, 1e-8);
  EXPECT_NEAR(h.poisson(1.0, -2.0).value, 0.09404736118, 1e-8);
  EXPECT_NEAR(geometric(2.0).poisson(1.0, -1.0).value, 0.2581243034, 1e-8);
  EXPECT_NEAR(geometric(2.0).poisson(1.0, -5.0).value, 0.001482106026, 1e-10);
  EXPECT_NEAR(geometric(2.0).poisson_scaled(1.0, -5.0).value * std::exp(-5.0), 0.001482106026, 1e-10);
}

TEST(HalfLine, GreenIsSymmetric) {
  for (double a : {0.5, 1.0, 2.0}) {
    const HalfLine& h = geometric(a);
    for (auto [x, y] : {std::pair{0.1, 0.7}, {1.0, 30.0}, {2.0, 2.5}})
      EXPECT_NEAR(h.green(x, y).value / h.green(y, x).value, 1.0, 1e-12);
  }
}

TEST(HalfLine, DominatesNormalizedStableGreen) {
  for (double a : {0.5, 1.0, 1.5, 2.0}) {
    const HalfLine& h = geometric(a);
    for (auto [x, y] : {std::pair{0.01, 0.02}, {0.5, 1.0}, {1.0, 2.0}, {3.0, 10.0}})
      EXPECT_GE(h.green(x, y).value, green_stable_halfline(a, x, y) / gamma_sq(a)) << a << " " << x << " " << y;
  }
}

TEST(HalfLine, OccupationIsIntegratedGreen) {
  // Pure mode keeps the diagonal integrable in double precision; the
  // geometric Green function's 1/(d log^2 d) mass near y = x sits below any
  // resolvable |y - x| and is checked against Monte Carlo instead.
  boost::math::quadrature::tanh_sinh<double> ts;
  for (double a : {1.5, 2.0}) {
    HalfLine h(ProcessSpec::pure(a, true));
    auto g = [&](double y) { return green_stable_halfline(a, 0.5, y); };
    const double direct = ts.integrate(g, 0.0, 0.5, 1e-10) + ts.integrate(g, 0.5, 1.0, 1e-10);
    EXPECT_NEAR(h.occupation(0.5, 1.0).value / direct, 1.0, 1e-7) << a;
  }
  EXPECT_NEAR(HalfLine(ProcessSpec::pure(2.0, true)).occupation(0.5, 1.0).value, 0.375, 1e-9);
  EXPECT_NEAR(geometric(1.0).occupation(0.5, 1.0).value, 1.31838902, 1e-7);
}

TEST(HalfLine, HarmonicMeasureHasUnitMass) {
  // Without a ladder drift the process leaves by a jump almost surely.
  for (double a : {1.0, 1.5}) {
    const HalfLine& h = geometric(a);
    auto f = [&](double s) { return std::exp(s) * h.poisson(1.0, -std::exp(s)).value; };
    const double mass = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, -80.0, 40.0, 8, 1e-9);
    EXPECT_NEAR(mass, 1.0, 1e-6) << a;
  }
}

TEST(HalfLine, ComparatorsStayInBand) {
  for (double a : {0.5, 1.0, 1.5, 2.0}) {
    const HalfLine& h = geometric(a);
    for (double x : {1e-2, 0.3, 1.0, 10.0, 100.0}) {
      for (double y : {2e-2, 0.5, 3.0, 50.0}) {
        const double r = h.green(x, y).value / h.green_comparator(x, y);
        EXPECT_GT(r, 1e-2);
        EXPECT_LT(r, 1e2);
      }
      for (double z : {-1e-2, -0.5, -3.0}) {
        const double r = h.poisson_scaled(x, z).value / h.poisson_comparator_scaled(x, z);
        EXPECT_GT(r, 1e-2) << a << " " << x << " " << z;
        EXPECT_LT(r, 1e2) << a << " " << x << " " << z;
      }
    }
  }
}

TEST(HalfLine, ExitBounds) {
  const HalfLine& h = geometric(1.0);
  EXPECT_NEAR(h.exit_prob_bounds(2.0, 2.0, 0.5).upper, 1.0, 1e-15);
  const Bounds b = h.exit_time_bounds(1.0, 4.0, 0.5);
  EXPECT_NEAR(b.upper, h.V(1.0) * h.V(4.0), 1e-14);
  EXPECT_NEAR(b.lower, b.upper * std::pow(0.5, 4) / 16, 1e-15);
  EXPECT_EQ(h.survival_lower(1e3, 1.0), 1.0);
  EXPECT_NEAR(h.survival_lower(1.0, 100.0), h.V(1.0) / 10, 1e-15);
}

TEST(HalfLine, ArgumentErrors) {
  const HalfLine& h = geometric(1.0);
  EXPECT_THROW(h.green(-1.0, 1.0), std::invalid_argument);
  EXPECT_THROW(h.poisson(1.0, 0.5), std::invalid_argument);
  EXPECT_THROW(h.exit_time_bounds(5.0, 4.0, 0.5), std::invalid_argument);
  EXPECT_THROW(h.jump_density(0.0), std::invalid_argument);
}
