#include <cmath>
#include <cstdlib>
#include <algorithm>
#include <sstream>

#include <gtest/gtest.h>

#include "geopot/montecarlo.hpp"

using namespace geopot;

namespace {

SimConfig config(double alpha, std::size_t paths) {
  SimConfig c;
  c.alpha = alpha;
  c.step_rule = StepRule::Adaptive;
  c.eta = 0.05;
  c.n_paths = paths;
  c.seed = 7;
  c.workers = 1;
  return c;
}

double mean_cos(double alpha, Mode mode, double h, double xi, int n) {
  std::mt19937_64 rng = path_rng(3, 0);
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += std::cos(xi * sample_increment(alpha, mode, h, rng));
  return s / n;
}

}  // namespace

TEST(Sampling, IncrementCharacteristicFunction) {
  const int n = 400000;
  for (double a : {0.5, 1.0, 1.5, 2.0}) {
    for (double xi : {0.5, 1.0, 3.0}) {
      EXPECT_NEAR(mean_cos(a, Mode::GeometricStable, 0.1, xi, n), std::pow(1 + std::pow(xi, a), -0.1), 4e-3)
          << "alpha " << a << " xi " << xi;
      EXPECT_NEAR(mean_cos(a, Mode::PureStable, 0.1, xi, n), std::exp(-0.1 * std::pow(xi, a)), 4e-3)
          << "alpha " << a << " xi " << xi;
    }
  }
}

TEST(Sampling, GaussianVariance) {
  std::mt19937_64 rng = path_rng(11, 0);
  const int n = 200000;
  double s2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = sample_increment(2.0, Mode::PureStable, 0.3, rng);
    s2 += x * x;
  }
  EXPECT_NEAR(s2 / n, 0.6, 0.01);
}

TEST(ExitSimulation, DeterministicAcrossRunsAndWorkers) {
  SimConfig c = config(1.0, 2000);
  const ExitBatch a = run_exit(Domain::interval(2.0), 0.5, c);
  const ExitBatch b = run_exit(Domain::interval(2.0), 0.5, c);
  c.workers = 4;
  const ExitBatch d = run_exit(Domain::interval(2.0), 0.5, c);
  EXPECT_EQ(a.exit_time, b.exit_time);
  EXPECT_EQ(a.exit_position, b.exit_position);
  EXPECT_EQ(a.exit_time, d.exit_time);
  EXPECT_EQ(a.exit_position, d.exit_position);
  c.seed = 8;
  EXPECT_NE(run_exit(Domain::interval(2.0), 0.5, c).exit_time, a.exit_time);
}

TEST(ExitSimulation, ThreadCapFromEnvironment) {
  setenv("GEOPOT_THREADS", "2", 1);
  EXPECT_EQ(effective_workers(8), 2u);
  EXPECT_EQ(effective_workers(1), 1u);
  unsetenv("GEOPOT_THREADS");
  EXPECT_EQ(effective_workers(3), 3u);
}

TEST(ExitSimulation, SymmetricStartExitsEitherSide) {
  const ExitBatch b = run_exit(Domain::symmetric(1.0), 0.0, config(1.5, 20000));
  const McEstimate right = estimate_harmonic_measure(b, {{1.0, INFINITY}});
  EXPECT_NEAR(right.mean, 0.5, 4 * right.std_error);
  for (std::size_t i = 0; i < b.size(); ++i) EXPECT_FALSE(Domain::symmetric(1.0).contains(b.exit_position[i]));
}

TEST(ExitSimulation, CensoringAndEstimators) {
  SimConfig c = config(1.0, 2000);
  c.escape = 3.0;
  const ExitBatch b = run_exit(Domain::halfline(), 1.0, c);
  EXPECT_GT(b.censored_count(), 0u);
  EXPECT_LT(b.censored_count(), b.size());
  const McEstimate t = estimate_exit_time(b);
  EXPECT_EQ(t.n, b.size() - b.censored_count());
  EXPECT_GT(t.mean, 0.0);
  const McEstimate s = estimate_survival(b, 0.0);
  EXPECT_EQ(s.mean, 1.0);
  EXPECT_EQ(estimate_survival(b, 1e300).mean, b.censored_fraction());
}

TEST(ExitSimulation, WindowCoveringTheDomainIsTheExitTime) {
  SimConfig c = config(1.0, 500);
  c.windows = {{0.0, 2.0}, {1.5, 1.5}};
  const ExitBatch b = run_exit(Domain::interval(2.0), 1.0, c);
  ASSERT_EQ(b.occupation.size(), 2 * b.size());
  for (std::size_t i = 0; i < b.size(); ++i) {
    EXPECT_NEAR(b.occupation[2 * i], b.exit_time[i], 1e-12 * (1 + b.exit_time[i]));
    EXPECT_EQ(b.occupation[2 * i + 1], 0.0);
  }
  EXPECT_NEAR(estimate_occupation(b, 0).mean, estimate_exit_time(b).mean, 1e-12);
}

TEST(ExitSimulation, CsvLayout) {
  const ExitBatch b = run_exit(Domain::interval(1.0), 0.5, config(2.0, 10));
  std::ostringstream out;
  b.write_csv(out);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line.rfind("# {", 0), 0u);
  std::getline(in, line);
  EXPECT_EQ(line, "exit_time,exit_position,censored");
  int rows = 0;
  while (std::getline(in, line)) {
    EXPECT_EQ(std::count(line.begin(), line.end(), ','), 2);
    ++rows;
  }
  EXPECT_EQ(rows, 10);
}

TEST(ExitSimulation, RejectsBadInput) {
  EXPECT_THROW(run_exit(Domain::interval(1.0), 2.0, config(1.0, 10)), std::invalid_argument);
  EXPECT_THROW(run_exit(Domain::interval(1.0), 0.5, config(2.5, 10)), std::invalid_argument);
}

TEST(Estimators, SampleMean) {
  const McEstimate e = sample_mean({1.0, 2.0, 3.0, 4.0});
  EXPECT_DOUBLE_EQ(e.mean, 2.5);
  EXPECT_NEAR(e.std_error, std::sqrt(5.0 / 3.0 / 4.0), 1e-15);
  EXPECT_EQ(sample_mean({}).n, 0u);
}
