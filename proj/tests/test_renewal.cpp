#include <cmath>

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <gtest/gtest.h>

#include "geopot/renewal.hpp"
#include "oracles.hpp"

using namespace geopot;

namespace {

const double kAlphas[] = {0.5, 1.0, 1.5, 2.0};

const RenewalEvaluator& geometric(double alpha) { return *RenewalEvaluator::shared(ProcessSpec::geometric(alpha)); }

std::vector<double> grid(double lo, double hi, int n) {
  std::vector<double> out;
  for (int i = 0; i < n; ++i) out.push_back(lo * std::pow(hi / lo, double(i) / (n - 1)));
  return out;
}

}  // namespace

TEST(Renewal, PureStableIsAPower) {
  for (double a : kAlphas) {
    const RenewalEvaluator& v = *RenewalEvaluator::shared(ProcessSpec::pure(a));
    for (double x : grid(1e-3, 1e3, 49)) {
      EXPECT_NEAR(v.V(x) / std::pow(x, a / 2) - 1.0, 0.0, 1e-5) << "alpha " << a << " x " << x;
      EXPECT_NEAR(v.Vprime(x) / (a / 2 * std::pow(x, a / 2 - 1)) - 1.0, 0.0, 1e-5) << "alpha " << a << " x " << x;
    }
  }
  const RenewalEvaluator& v1 = *RenewalEvaluator::shared(ProcessSpec::pure(1.0));
  EXPECT_NEAR(v1.V(4.0), 2.0, 2e-5);
  EXPECT_NEAR(v1.Vprime(4.0), 0.25, 3e-6);
  EXPECT_LT(v1.V(1e-10), 1e-2);
}

TEST(Renewal, LaplaceTransformMatchesLadderExponent) {
  // lambda int_0^inf e^{-lambda x} V(x) dx = 1 / psi_dagger(lambda)
  boost::math::quadrature::tanh_sinh<double> ts;
  for (double a : kAlphas) {
    const RenewalEvaluator& v = geometric(a);
    for (double lambda : {0.1, 1.0, 10.0}) {
      auto f = [&](double x) { return lambda * std::exp(-lambda * x) * v.V(x); };
      const double lt = ts.integrate(f, 0.0, 60.0 / lambda, 1e-11);
      EXPECT_NEAR(lt * oracle::ladder_exponent(a, lambda), 1.0, 1e-7) << "alpha " << a << " lambda " << lambda;
    }
  }
}

TEST(Renewal, FrozenValue) { EXPECT_NEAR(geometric(1.0).V(1.0), 1.4108016142076, 1e-10); }

TEST(Renewal, DerivativeMatchesFiniteDifference) {
  for (double a : kAlphas) {
    const RenewalEvaluator& v = geometric(a);
    for (double x : {1e-3, 0.1, 1.0, 10.0, 1e3}) {
      const double h = 1e-4 * x;
      const double fd = (v.V(x + h) - v.V(x - h)) / (2 * h);
      EXPECT_NEAR(fd / v.Vprime(x), 1.0, 1e-6) << "alpha " << a << " x " << x;
      EXPECT_NEAR(v.x_Vprime(x), x * v.Vprime(x), 1e-10 * x * v.Vprime(x));
    }
  }
}

TEST(Renewal, TableAgreesWithDirectQuadrature) {
  const RenewalEvaluator& v = geometric(1.5);
  for (double x : {3e-4, 0.07, 2.2, 45.0}) {
    EXPECT_NEAR(v.V(x) / v.evaluate_V(x).value, 1.0, 1e-7);
    EXPECT_NEAR(v.Vprime(x) / v.evaluate_Vprime(x).value, 1.0, 1e-7);
  }
}

TEST(Renewal, IncreasingConcaveSubadditive) {
  for (double a : kAlphas) {
    const RenewalEvaluator& v = geometric(a);
    const auto xs = grid(1e-4, 1e4, 33);
    for (std::size_t i = 1; i < xs.size(); ++i) {
      EXPECT_LT(v.V(xs[i - 1]), v.V(xs[i]));
      EXPECT_GE(v.Vprime(xs[i - 1]) * (1 + 1e-12), v.Vprime(xs[i]));
    }
    for (double x : xs)
      for (double y : {1e-3, 0.5, 7.0}) EXPECT_LE(v.V(x + y), (v.V(x) + v.V(y)) * (1 + 1e-12));
    EXPECT_LE(v.evaluate_x2_Vsecond(1.0).value, 0.0);
  }
}

TEST(Renewal, Comparators) {
  EXPECT_NEAR(V_comparator(1.3, 1.0), 1.0 / std::sqrt(std::log(2.0)), 1e-14);
  EXPECT_NEAR(V_comparator(1.3, 1.0), 1.20112, 1e-5);
  EXPECT_NEAR(Vprime_comparator(0.7, 1.0), 1.73285, 1e-5);
  EXPECT_NEAR(V_comparator(2.0, 100.0), 100.0025, 1e-4);
}

TEST(Renewal, GaussianDerivativeTendsToOne) { EXPECT_NEAR(geometric(2.0).Vprime(1e3), 1.0, 1e-3); }

TEST(Renewal, ValuesStayComparableToComparators) {
  for (double a : kAlphas) {
    const RenewalEvaluator& v = geometric(a);
    for (double x : grid(1e-3, 1e3, 25)) {
      const double rv = v.V(x) / V_comparator(a, x);
      const double rd = v.Vprime(x) / Vprime_comparator(a, x);
      EXPECT_GT(rv, 1e-2);
      EXPECT_LT(rv, 1e2);
      EXPECT_GT(rd, 1e-2);
      EXPECT_LT(rd, 1e2);
    }
  }
}

TEST(Renewal, IntegralIdentities) {
  const auto pure2 = int_identities(*RenewalEvaluator::shared(ProcessSpec::pure(2.0)), 3.0);
  EXPECT_NEAR(pure2.int1.ratio(), 0.5, 1e-5);

  const auto g1 = int_identities(geometric(1.0), 0.1);
  ASSERT_TRUE(g1.int3.valid);
  EXPECT_NEAR(g1.int3.ratio(), 1.689243341, 1e-6);
  EXPECT_FALSE(g1.int2.valid);

  for (double a : kAlphas) {
    for (double x : {1e-3, 0.3, 5.0, 300.0}) {
      const auto ids = int_identities(geometric(a), x);
      // V increasing and V(x) <= 2 V(x/2) pin the first ratio to [1/4, 1].
      EXPECT_GE(ids.int1.ratio(), 0.25);
      EXPECT_LE(ids.int1.ratio(), 1.0);
      EXPECT_EQ(ids.int2.valid, x >= 2.0);
      EXPECT_EQ(ids.int3.valid, x <= 0.5);
    }
  }
}
