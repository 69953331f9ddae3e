#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <limits>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "geopot/spectral.hpp"

namespace geopot {

/// Open interval (lo, hi); either end may be infinite.
struct Domain {
  double lo = 0.0;
  double hi = std::numeric_limits<double>::infinity();

  static Domain halfline() { return {}; }
  static Domain interval(double R) { return {0.0, R}; }
  static Domain symmetric(double r) { return {-r, r}; }

  bool contains(double x) const { return x > lo && x < hi; }
  /// Distance from x to the complement.
  double distance(double x) const;
  double length() const { return hi - lo; }
  std::string describe() const;
};

enum class StepRule {
  /// Constant time step h.
  Fixed,
  /// h = eta / Psi(1/d) at distance d from the complement: a constant
  /// probability of crossing the boundary in one step.
  Adaptive,
};

struct SimConfig {
  double alpha = 1.0;
  Mode mode = Mode::GeometricStable;
  StepRule step_rule = StepRule::Fixed;
  /// Fixed step; 0 selects 1e-3 times the exit-time envelope, clamped to [1e-6, 1e-2].
  double h = 0.0;
  double eta = 0.02;
  std::size_t n_paths = 1000;
  std::uint64_t seed = 1;
  /// 0 uses the hardware concurrency; GEOPOT_THREADS caps either.
  unsigned workers = 0;
  double max_time = 1e4;
  std::uint64_t max_steps = 10'000'000;
  /// Paths reaching |X| > escape are censored (useful on half-lines).
  double escape = std::numeric_limits<double>::infinity();
  /// Occupation windows [a, b] recorded per path.
  std::vector<std::pair<double, double>> windows;
};

/// Per-path RNG: a 64-bit Mersenne twister keyed by (seed, path index), so
/// each path's stream is independent of scheduling and worker count.
std::mt19937_64 path_rng(std::uint64_t seed, std::uint64_t path);

/// Draws of the building blocks. The stable variable has E e^{i xi S} = e^{-|xi|^alpha}.
double sample_stable(double alpha, std::mt19937_64& rng);

/// Exact-in-law increment of X over time h: S_alpha scaled by T^{1/alpha},
/// T ~ Gamma(h, 1) (GeometricStable) or T = h (PureStable).
double sample_increment(double alpha, Mode mode, double h, std::mt19937_64& rng);

struct ExitBatch {
  SimConfig config;
  Domain domain;
  double start = 0.0;
  /// Step actually used for the Fixed rule (after defaulting); 0 for Adaptive.
  double h = 0.0;
  unsigned workers_used = 1;

  std::vector<double> exit_time;
  std::vector<double> exit_position;
  std::vector<std::uint8_t> censored;
  /// Row-major n_paths x windows.
  std::vector<double> occupation;

  std::size_t size() const { return exit_time.size(); }
  std::size_t censored_count() const;
  double censored_fraction() const;
  /// More than half of the paths censored.
  bool censoring_warning() const { return censored_fraction() > 0.5; }

  /// Config and provenance as a compact JSON object (sorted keys).
  std::string header_json() const;
  /// "# <header json>" line, then exit_time,exit_position,censored rows.
  void write_csv(std::ostream& out) const;
};

/// Simulates n_paths paths started at x until they leave the domain.
ExitBatch run_exit(const Domain& domain, double x, const SimConfig& config);

/// Default fixed step for a start point.
double default_step(const Domain& domain, double x, double alpha);

struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t n = 0;
};

/// Mean of a per-path sample with pairwise summation.
McEstimate sample_mean(const std::vector<double>& values);

/// Mean exit time over uncensored paths.
McEstimate estimate_exit_time(const ExitBatch& batch);
/// Mean occupation of window k over all paths (censored paths contribute
/// their occupation up to censoring).
McEstimate estimate_occupation(const ExitBatch& batch, std::size_t window);
/// Fraction of uncensored paths exiting into the union of the given intervals.
McEstimate estimate_harmonic_measure(const ExitBatch& batch, const std::vector<std::pair<double, double>>& target);
/// Fraction of all paths still inside at time t (censored paths count as survivors).
McEstimate estimate_survival(const ExitBatch& batch, double t);

/// Convenience forms that run the simulation first.
McEstimate estimate_occupation(const Domain& domain, double x, std::pair<double, double> window, SimConfig config);
McEstimate estimate_harmonic_measure(const Domain& domain, double x,
                                     const std::vector<std::pair<double, double>>& target, const SimConfig& config);

struct ProbeRow {
  double step = 0.0;
  McEstimate estimate;
  double censored_fraction = 0.0;
};

/// Re-estimates a functional at each step (h for Fixed, eta for Adaptive)
/// with the same seed.
std::vector<ProbeRow> bias_probe(const Domain& domain, double x, SimConfig config, const std::vector<double>& steps,
                                 const std::function<McEstimate(const ExitBatch&)>& quantity);

/// Workers actually used for a request, after GEOPOT_THREADS.
unsigned effective_workers(unsigned requested);

}  // namespace geopot
