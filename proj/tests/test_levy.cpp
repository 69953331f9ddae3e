#include <cmath>
#include <numbers>

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <gtest/gtest.h>

#include "geopot/levy.hpp"
#include "oracles.hpp"

using namespace geopot;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST(StableDensity, ClosedForms) {
  for (double x : {0.0, 0.3, 1.0, 4.0}) {
    EXPECT_NEAR(stable_density(1.0, x, 1.0), 1.0 / (kPi * (1 + x * x)), 1e-15);
    EXPECT_NEAR(stable_density(1.0, x, 2.0), std::exp(-x * x / 4) / std::sqrt(4 * kPi), 1e-15);
  }
  // s_u(x) = u^{-1/alpha} s_1(u^{-1/alpha} x)
  EXPECT_NEAR(stable_density(8.0, 1.0, 1.0), 8.0 / (kPi * 65.0), 1e-15);
  EXPECT_NEAR(stable_density(1.0, 0.0, 0.5), 2.0 / kPi, 1e-9);
}

TEST(StableDensity, MatchesIntegralRepresentation) {
  for (double a : {0.5, 0.8, 1.2, 1.5, 1.9}) {
    const StableDensity& s = *StableDensity::shared(a);
    for (double w : {0.05, 0.5, 1.0, 2.0, 5.0, 10.0, 50.0})
      EXPECT_NEAR(s.s1(w) / oracle::zolotarev_density(a, w), 1.0, 1e-6) << "alpha " << a << " w " << w;
  }
}

TEST(StableDensity, StitchPointsAndTail) {
  const std::pair<double, double> stitch[] = {{0.5, 1.5}, {0.8, 1.5}, {1.2, 2.443}, {1.5, 4.838}, {1.9, 8.688}};
  for (auto [a, w] : stitch) {
    const StableDensity& s = *StableDensity::shared(a);
    EXPECT_NEAR(s.stitch_point(), w, 2e-3) << "alpha " << a;
    const double c = boost::math::tgamma(1 + a) * std::sin(kPi * a / 2) / kPi;
    EXPECT_NEAR(s.tail_constant() / c, 1.0, 1e-6) << "alpha " << a;
    EXPECT_NEAR(s.series_coefficient(1), c, 1e-12);
    // Continuity across the stitch.
    const double w0 = s.stitch_point();
    EXPECT_NEAR(s.s1(w0 * (1 - 1e-9)) / s.s1(w0 * (1 + 1e-9)), 1.0, 2e-6);
  }
}

TEST(StableDensity, DerivativeMatchesFiniteDifference) {
  const StableDensity& s = *StableDensity::shared(1.5);
  for (double w : {0.2, 1.0, 3.0, 20.0}) {
    const double h = 1e-5 * w;
    EXPECT_NEAR((s.s1(w + h) - s.s1(w - h)) / (2 * h), s.s1_derivative(w), 1e-6 * std::abs(s.s1_derivative(w)) + 1e-12);
  }
}

TEST(GammaDensity, Values) {
  EXPECT_NEAR(gamma_density(1.0, 1.0), 0.367879, 1e-6);
  EXPECT_NEAR(gamma_density(2.0, 3.0), 0.149361, 1e-6);
  EXPECT_NEAR(gamma_density(0.5, 0.25), 0.878783, 1e-6);
}

TEST(JumpDensity, GaussianCaseIsExplicit) {
  const SubordinatedLaw& law = *SubordinatedLaw::shared(2.0);
  EXPECT_NEAR(law.nu(1.0), std::exp(-1.0), 1e-15);
  EXPECT_NEAR(law.nu(2.0), std::exp(-2.0) / 2, 1e-15);
  for (double x : {0.1, 0.3, 1.0, 3.0, 10.0}) {
    const double exact = std::exp(-x) / x;
    EXPECT_NEAR(law.nu_by_subordination(x).value / exact, 1.0, 1e-5) << x;
  }
}

TEST(JumpDensity, SymmetricDecreasingComparable) {
  for (double a : {0.5, 1.0, 1.5, 2.0}) {
    const SubordinatedLaw& law = *SubordinatedLaw::shared(a);
    double prev = law.nu(1e-4);
    for (int k = -39; k <= 40; ++k) {
      const double x = std::pow(10.0, k / 10.0);
      const double v = law.nu(x);
      EXPECT_EQ(v, law.nu(-x));
      if (prev > 0.0) EXPECT_LT(v, prev);
      else EXPECT_EQ(v, 0.0);
      EXPECT_LE(law.nu_derivative(x), 0.0);
      prev = v;
      // The comparator describes the power-law tails; alpha = 2 decays exponentially.
      if (a == 2.0) continue;
      const double r = v / law.nu_comparator(x);
      EXPECT_GT(r, 1e-2) << "alpha " << a << " x " << x;
      EXPECT_LT(r, 1e2) << "alpha " << a << " x " << x;
    }
    EXPECT_THROW(law.nu(0.0), std::invalid_argument);
  }
}

TEST(JumpDensity, TableMatchesDirectSubordination) {
  const SubordinatedLaw& law = *SubordinatedLaw::shared(1.0);
  for (double x : {1e-3, 0.05, 1.0, 20.0}) EXPECT_NEAR(law.nu(x) / law.nu_by_subordination(x).value, 1.0, 1e-7);
  EXPECT_NEAR(law.nu(1e-2) * 1e-2 * (1 + 1e-2), 0.488811, 1e-6);
  EXPECT_NEAR(law.nu(1e2) * 1e2 * (1 + 1e2), 0.321429, 1e-6);
}

TEST(TransitionDensity, DiagonalValues) {
  EXPECT_NEAR(transition_density(1.0, 2.0, 0.0).value, 1.0 / kPi, 1e-9);
  EXPECT_TRUE(std::isinf(transition_density(1.0, 1.0, 0.0).value));
  EXPECT_TRUE(std::isinf(transition_density(2.0, 0.5, 0.0).value));
}

TEST(TransitionDensity, IntegratesToOne) {
  boost::math::quadrature::tanh_sinh<double> ts;
  for (double t : {1.5, 3.0}) {
    auto f = [t](double x) { return transition_density(2.0, t, x).value; };
    const double mass = 2 * (ts.integrate(f, 0.0, 1.0, 1e-9) + ts.integrate(f, 1.0, 30.0, 1e-9));
    EXPECT_NEAR(mass, 1.0, 1e-4) << "t " << t;
  }
}
